#include "toti/bundle.hpp"

#include "toti/errors.hpp"
#include "toti/odometer.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace toti {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i)
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw MissingFile("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

namespace {

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::string two_digits(std::size_t n) {
  std::ostringstream out;
  out << std::setw(2) << std::setfill('0') << n;
  return out.str();
}

std::string map_file(const PiecewiseTranslation& t) { return dump(to_json(t)); }

std::vector<std::pair<std::string, const Transform*>> stored_maps(const BuildResult& res) {
  std::vector<std::pair<std::string, const Transform*>> out;
  for (std::size_t i = 0; i < res.alpha.size(); ++i)
    out.push_back({"alpha/a" + std::to_string(i + 1) + ".json", &res.alpha[i]});
  for (std::size_t i = 0; i < res.alpha_inf.size(); ++i)
    out.push_back({"alpha_inf/a" + std::to_string(i + 1) + ".json", &res.alpha_inf[i]});
  out.push_back({"witnesses/T.json", &res.T});
  out.push_back({"witnesses/V.json", &res.V});
  out.push_back({"witnesses/W.json", &res.W});
  out.push_back({"witnesses/I.json", &res.I});
  for (std::size_t i = 0; i < res.U.size(); ++i)
    out.push_back({"witnesses/U_" + std::to_string(i + 2) + ".json", &res.U[i]});
  return out;
}

Transform* stored_target(BuildResult& res, const std::string& name) {
  auto list = stored_maps(res);
  for (auto& [path, ptr] : list)
    if (path == name)
      return const_cast<Transform*>(ptr);
  return nullptr;
}

}  // namespace

std::map<std::string, std::string> render_bundle(const BuildResult& res) {
  std::map<std::string, std::string> files;
  files["config.txt"] = write_config(res.params);
  for (const auto& [path, t] : stored_maps(res))
    files[path] = map_file(*t);
  files["witnesses/V_unit.json"] = map_file(res.V_unit);
  files["witnesses/psi.json"] = dump(to_json(res.psi));
  for (std::size_t i = 0; i < res.phi.size(); ++i)
    files["witnesses/phi_" + std::to_string(i + 2) + ".json"] = dump(to_json(res.phi[i]));

  nlohmann::ordered_json sets;
  sets["Y"] = to_json(res.Y);
  sets["Y_measure"] = to_string(res.Y.measure());
  sets["C"] = to_json(res.C);
  sets["middle"] = to_json(res.middle);
  sets["A"] = to_json(res.A);
  sets["B"] = to_json(res.B);
  sets["D"] = to_json(res.D);
  sets["eta"] = to_string(res.eta);
  sets["m0"] = res.m0;
  sets["v_level"] = res.v_level;
  auto cn = nlohmann::ordered_json::array();
  for (const auto& e : res.balls) {
    nlohmann::ordered_json b;
    b["C_n"] = to_json(e.region);
    b["xi"] = e.completed.marked;
    auto blocks = nlohmann::ordered_json::array();
    for (const auto& blk : e.blocks)
      blocks.push_back(to_json(blk));
    b["blocks"] = blocks;
    cn.push_back(b);
  }
  sets["balls"] = cn;
  files["sets.json"] = dump(sets);

  for (std::size_t n = 0; n < res.balls.size(); ++n) {
    const auto& e = res.balls[n];
    const std::string stem = "balls/ball_" + two_digits(n + 1);
    nlohmann::ordered_json j;
    j["G"] = to_json(e.g);
    j["completed"] = to_json(e.completed);
    files[stem + ".json"] = dump(j);
    files[stem + ".dot"] = to_dot(e.completed.action, e.completed.marked);
  }

  auto cert = evanescent_certificate(res.V_unit, res.params.evanescentM, res.params.evanescentN);
  nlohmann::ordered_json certs;
  certs["evanescent"] = to_json(cert);
  certs["evanescent"]["m"] = res.params.evanescentM;
  certs["evanescent"]["n"] = res.params.evanescentN;
  files["certificates.json"] = dump(certs);

  std::string log;
  for (const auto& line : res.log)
    log += line + "\n";
  files["provenance.log"] = log;
  return files;
}

void write_bundle(const BuildResult& res, const std::filesystem::path& dir, double build_seconds) {
  auto files = render_bundle(res);
  nlohmann::ordered_json manifest;
  manifest["tool"] = "toti";
  manifest["version"] = kToolVersion;
  manifest["config_sha256"] = sha256_hex(files.at("config.txt"));
  nlohmann::ordered_json digests;
  for (const auto& [path, contents] : files) {
    write_file(dir / path, contents);
    digests[path] = sha256_hex(contents);
  }
  manifest["files"] = digests;
  manifest["timing"] = {{"build_seconds", build_seconds}};
  write_file(dir / "manifest.json", dump(manifest));
}

LoadedBundle load_bundle(const std::filesystem::path& dir) {
  const std::string config = read_file(dir / "config.txt");
  const std::string manifest_text = read_file(dir / "manifest.json");
  LoadedBundle out;
  out.report.title = "bundle";
  out.result = build(parse_config(config));
  const auto reference = render_bundle(out.result);

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(manifest_text);
  } catch (const nlohmann::json::exception& e) {
    out.report.add("manifest.json parses", false, e.what());
  }
  if (manifest.is_object() && manifest.contains("files")) {
    for (const auto& [path, contents] : reference) {
      std::string stored;
      try {
        stored = read_file(dir / path);
      } catch (const MissingFile&) {
        throw MissingFile("bundle file " + path + " is missing");
      }
      auto digest = manifest["files"].value(path, std::string());
      if (digest != sha256_hex(stored))
        out.report.add("manifest digest of " + path, false, "file does not match its recorded digest");
    }
  }

  for (const auto& [path, ptr] : stored_maps(out.result)) {
    const std::string stored = read_file(dir / path);
    Transform* target = stored_target(out.result, path);
    try {
      Transform t = piecewise_from_json(nlohmann::json::parse(stored));
      if (!t.is_total())
        throw ParseError("map is not total");
      *target = t;
    } catch (const std::exception& e) {
      out.report.add(path + " parses as a total map", false, e.what());
      continue;
    }
    if (stored != reference.at(path))
      out.report.add(path + " matches the rebuild from config.txt", false);
  }
  if (out.report.clauses.empty())
    out.report.add("stored files match manifest and rebuild", true);
  return out;
}

}  // namespace toti
