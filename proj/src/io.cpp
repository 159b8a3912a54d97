#include "puretone/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "puretone/errors.hpp"

namespace puretone {

using nlohmann::json;

namespace {

double number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw IoError(where + ": missing field '" + key + "'");
  if (!obj.at(key).is_number()) throw IoError(where + ": field '" + key + "' must be a number");
  return obj.at(key).get<double>();
}

std::vector<double> number_array(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_array())
    throw IoError(where + ": field '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : obj.at(key)) {
    if (!v.is_number()) throw IoError(where + ": '" + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

QuietState parse_profile(const json& doc) {
  if (!doc.is_object()) throw IoError("profile: document must be a JSON object");
  QuietState st;
  st.p_bar = doc.contains("pbar") ? number(doc, "pbar", "profile") : 1.0;
  if (doc.contains("eos")) {
    const auto& e = doc.at("eos");
    if (e.contains("gamma")) st.eos.gamma = number(e, "gamma", "profile.eos");
    if (e.contains("k_ref")) st.eos.k_ref = number(e, "k_ref", "profile.eos");
  }
  try {
    st.validate();
  } catch (const DomainError& ex) {
    throw IoError(std::string("profile: ") + ex.what());
  }
  if (!doc.contains("kind") || !doc.at("kind").is_string())
    throw IoError("profile: field 'kind' must be \"pwc\" or \"smooth\"");
  const std::string kind = doc.at("kind").get<std::string>();
  try {
    if (kind == "pwc") {
      if (!doc.contains("levels") || !doc.at("levels").is_array() || doc.at("levels").empty())
        throw IoError("profile: 'levels' must be a nonempty array");
      std::vector<double> sigma, widths;
      std::size_t i = 0;
      for (const auto& lv : doc.at("levels")) {
        const std::string where = "profile.levels[" + std::to_string(i++) + "]";
        widths.push_back(number(lv, "L", where));
        if (lv.contains("sigma") == lv.contains("A"))
          throw IoError(where + ": give exactly one of 'sigma' or 'A'");
        if (lv.contains("sigma"))
          sigma.push_back(number(lv, "sigma", where));
        else
          sigma.push_back(gamma_law::sigma(st.eos.gamma, number(lv, "A", where), st.p_bar));
      }
      st.profile = Profile::piecewise_constant(sigma, widths);
    } else if (kind == "smooth") {
      if (!doc.contains("pieces") || !doc.at("pieces").is_array() || doc.at("pieces").empty())
        throw IoError("profile: 'pieces' must be a nonempty array");
      std::vector<SampledPiece> pieces;
      std::size_t i = 0;
      for (const auto& pc : doc.at("pieces")) {
        const std::string where = "profile.pieces[" + std::to_string(i++) + "]";
        SampledPiece sp{number_array(pc, "x", where), number_array(pc, "sigma", where)};
        if (sp.x.size() != sp.sigma.size())
          throw IoError(where + ": 'x' and 'sigma' differ in length");
        pieces.push_back(std::move(sp));
      }
      st.profile = Profile::smooth(pieces);
    } else {
      throw IoError("profile: unknown kind '" + kind + "'");
    }
  } catch (const DomainError& ex) {
    throw IoError(std::string("profile: ") + ex.what());
  }
  if (doc.contains("ell")) {
    const double ell = number(doc, "ell", "profile");
    if (std::abs(ell - st.profile.ell()) > 1e-12 * std::max(1.0, std::abs(ell)))
      throw IoError("profile: 'ell' does not match the total width of the profile");
  }
  return st;
}

QuietState load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("invalid JSON in " + path.string() + ": " + e.what());
  }
  try {
    return parse_profile(doc);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

QuietState builtin_profile(const std::string& name) {
  QuietState st;
  if (name == "constant")
    st.profile = Profile::constant(1.0, 1.0);
  else if (name == "two-level")
    st.profile = Profile::piecewise_constant({1.0, 2.0}, {0.5, 0.5});
  else
    throw IoError("unknown builtin profile: " + name);
  return st;
}

QuietState resolve_profile(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) return builtin_profile(spec.substr(prefix.size()));
  return load_profile(spec);
}

json profile_to_json(const QuietState& st) {
  json doc;
  doc["ell"] = st.profile.ell();
  doc["pbar"] = st.p_bar;
  doc["eos"] = {{"gamma", st.eos.gamma}, {"k_ref", st.eos.k_ref}};
  if (st.profile.is_piecewise_constant()) {
    doc["kind"] = "pwc";
    json levels = json::array();
    for (const auto& p : st.profile.pieces())
      levels.push_back({{"sigma", p.sigma_left()}, {"L", p.length()}});
    doc["levels"] = levels;
  } else {
    doc["kind"] = "smooth";
    json pieces = json::array();
    for (const auto& p : st.profile.pieces()) {
      if (p.is_constant())
        pieces.push_back({{"x", {p.x0(), p.x1()}}, {"sigma", {p.sigma_left(), p.sigma_left()}}});
      else
        pieces.push_back({{"x", p.shape().knots()}, {"sigma", p.shape().values()}});
    }
    doc["pieces"] = pieces;
  }
  return doc;
}

std::string profile_hash(const QuietState& st) {
  const std::string text = profile_to_json(st).dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("profile_hash: digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot write file: " + path.string());
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  auto out = open_out(path);
  write_row(out, table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw IoError("write_csv: ragged row in " + path.string());
    write_row(out, r);
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file: " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV file: " + path.string());
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split(line));
    if (t.rows.back().size() != t.header.size())
      throw IoError("ragged CSV row in " + path.string());
  }
  return t;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectoryNode>& trajectory, int nt) {
  if (trajectory.empty()) throw IoError("write_trajectory_csv: empty trajectory");
  const int M = trajectory.front().y.modes();
  TimeGrid grid(M, nt);
  auto out = open_out(path);
  std::vector<std::string> header{"x"};
  for (int n = 0; n < nt; ++n) header.push_back("p_" + std::to_string(n));
  for (int n = 0; n < nt; ++n) header.push_back("u_" + std::to_string(n));
  write_row(out, header);
  std::vector<double> p(static_cast<std::size_t>(nt)), u(p.size());
  std::vector<double> zero(static_cast<std::size_t>(M) + 1, 0.0);
  for (const auto& node : trajectory) {
    grid.synthesize_even(node.y.a.data(), p.data());
    grid.synthesize(zero.data(), node.y.b.data(), u.data());
    std::vector<std::string> row{format_double(node.x)};
    for (double v : p) row.push_back(format_double(v));
    for (double v : u) row.push_back(format_double(v));
    write_row(out, row);
  }
}

void write_tile_csv(const std::filesystem::path& path, const TileField& tile) {
  auto out = open_out(path);
  write_row(out, {"x", "t", "p", "u"});
  for (std::size_t i = 0; i < tile.nx(); ++i)
    for (std::size_t n = 0; n < tile.nt(); ++n)
      write_row(out, {format_double(tile.x[i]), format_double(tile.t[n]),
                      format_double(tile.P(i, n)), format_double(tile.U(i, n))});
}

namespace {
constexpr char kMagic[8] = {'P', 'T', 'T', 'I', 'L', 'E', '0', '1'};

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw IoError("truncated tile file");
  return v;
}
}  // namespace

void write_tile_binary(const std::filesystem::path& path, const TileField& tile) {
  auto out = open_out(path, true);
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(tile.chi));
  put<std::uint32_t>(out, 0);
  put<std::uint64_t>(out, tile.nx());
  put<std::uint64_t>(out, tile.nt());
  put<double>(out, tile.T);
  put<double>(out, tile.period_x);
  auto block = [&](const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  block(tile.x);
  block(tile.t);
  block(tile.p);
  block(tile.u);
}

TileField read_tile_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tile file: " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw IoError("not a tile file: " + path.string());
  TileField t;
  t.chi = static_cast<int>(get<std::uint32_t>(in));
  get<std::uint32_t>(in);
  const auto nx = get<std::uint64_t>(in);
  const auto nt = get<std::uint64_t>(in);
  t.T = get<double>(in);
  t.period_x = get<double>(in);
  auto block = [&](std::vector<double>& v, std::size_t n) {
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw IoError("truncated tile file: " + path.string());
  };
  block(t.x, nx);
  block(t.t, nt);
  block(t.p, nx * nt);
  block(t.u, nx * nt);
  return t;
}

json RunManifest::to_json() const {
  return {{"command", command}, {"config", config},   {"profile_hash", profile_hash},
          {"seed", seed},       {"version", version}, {"timings", timings},
          {"outputs", outputs}};
}

}  // namespace puretone
