// toti: build and verify totipotent free-group actions at desk scale.
//
// Exit codes: 0 success, 1 verification failure, 2 bad config, usage or
// missing file, 3 infeasible build.

#include "toti/builder.hpp"
#include "toti/bundle.hpp"
#include "toti/errors.hpp"
#include "toti/odometer.hpp"
#include "toti/schreier.hpp"
#include "toti/stallings.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace fs = std::filesystem;
using namespace toti;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kInfeasible = 3 };

int cmd_build(const std::string& config_path, const std::string& out_dir) {
  const auto params = parse_config(read_file(config_path));
  const auto start = std::chrono::steady_clock::now();
  const BuildResult res = build(params);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_bundle(res, out_dir, secs);
  std::cout << "built " << res.balls.size() << " balls into " << out_dir << " (m0 = " << res.m0
            << ", eta = " << to_string(res.eta) << ")\n";
  return kOk;
}

int cmd_verify(const std::string& bundle_dir, const std::string& out_dir, int radius) {
  auto loaded = load_bundle(bundle_dir);
  const BuildResult& res = loaded.result;
  std::vector<Report> reports{loaded.report, check_invariants(res), verify_step4(res),
                              verify_totipotency(res, radius)};
  Report certs;
  certs.title = "certificates";
  try {
    const Transform v_unit = scale_out(res.V, res.params.muY);
    auto ev = evanescent_certificate(v_unit, res.params.evanescentM, res.params.evanescentN);
    certs.add("evanescent certificate for V (m=" + std::to_string(res.params.evanescentM) +
                  ", n=" + std::to_string(res.params.evanescentN) + ")",
              ev.verdict, method_name(ev.method));
  } catch (const std::exception& e) {
    certs.add("evanescent certificate for V", false, e.what());
  }
  for (int n = 2; n <= 3; ++n) {
    auto c = lemma_conjugates_certificate(n);
    certs.add("conjugates of U_" + std::to_string(n) + " generate Sym(" + std::to_string(1 << n) + ")",
              c.verdict, method_name(c.method));
  }
  reports.push_back(certs);

  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  bool ok = true;
  for (const auto& r : reports) {
    all.push_back(r.to_json());
    for (const auto& c : r.clauses)
      if (!c.pass) {
        ok = false;
        std::cerr << "FAIL [" << r.title << "] " << c.name;
        if (!c.detail.empty())
          std::cerr << ": " << c.detail;
        std::cerr << "\n";
      }
  }
  if (!out_dir.empty())
    write_file(fs::path(out_dir) / "verify_report.json", all.dump(2) + "\n");
  else
    std::cout << all.dump(2) << "\n";
  return ok ? kOk : kVerifyFailed;
}

int cmd_enumerate(int rank, int min_v, int max_v, const std::string& out_dir) {
  std::size_t count = 0;
  enumerate_partial_actions(rank, static_cast<std::size_t>(min_v), static_cast<std::size_t>(max_v),
                            [&](const PartialAction& g) {
                              ++count;
                              if (!out_dir.empty()) {
                                std::string stem = (fs::path(out_dir) / ("g" + std::to_string(count))).string();
                                write_file(stem + ".json", to_json(g).dump(2) + "\n");
                                write_file(stem + ".dot", to_dot(g));
                              }
                              return true;
                            });
  std::cout << count << "\n";
  return kOk;
}

int cmd_irs(const std::string& bundle_dir, const std::string& x, int radius, int word_len) {
  auto loaded = load_bundle(bundle_dir);
  auto sample = irs_sample(loaded.result, parse_rat(x), radius, word_len);
  auto j = to_json(sample);
  auto sub = stabilizer_to_subgroup(sample, loaded.result.params.r);
  j["stabilizer_automaton"] = to_json(sub);
  auto idx = index(sub);
  j["index"] = idx ? nlohmann::ordered_json(*idx) : nlohmann::ordered_json("infinite");
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_subgroup(int rank, const std::string& gens, const std::string& query,
                 const std::string& word, long n_max) {
  const auto words = parse_words(gens);
  const auto a = subgroup_from_generators(rank, words);
  nlohmann::ordered_json j;
  auto idx = index(a);
  if (query == "index") {
    std::cout << (idx ? std::to_string(*idx) : "infinite") << "\n";
    return kOk;
  }
  if (query == "contains") {
    std::cout << (contains_word(a, Word::parse(word)) ? "true" : "false") << "\n";
    return kOk;
  }
  if (query == "kernel") {
    std::cout << (in_perfect_kernel(a, rank) ? "true" : "false") << "\n";
    return kOk;
  }
  if (query == "automaton") {
    j = to_json(a);
  } else if (query == "basis") {
    for (const auto& w : basis(a))
      j.push_back(w.str());
  } else if (query == "hall") {
    j = to_json(hall_completion(a));
  } else if (query == "isolation") {
    auto iw = isolation_witness(a, n_max);
    j["g"] = iw.g.str();
    j["increasing"] = iw.increasing;
    for (const auto& s : iw.steps) {
      nlohmann::ordered_json sj;
      sj["n"] = s.n;
      sj["infinite_index"] = s.infinite_index;
      sj["agreement"] = s.agreement;
      for (const auto& w : s.generators)
        sj["generators"].push_back(w.str());
      j["steps"].push_back(sj);
    }
  } else {
    throw CLI::ValidationError("--query", "unknown query '" + query + "'");
  }
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_distance(const std::string& f1, const std::string& f2) {
  auto s = piecewise_from_json(nlohmann::json::parse(read_file(f1)));
  auto t = piecewise_from_json(nlohmann::json::parse(read_file(f2)));
  std::cout << to_string(uniform_distance(s, t)) << "\n";
  return kOk;
}

int cmd_export_dot(const std::string& file) {
  auto j = nlohmann::json::parse(read_file(file));
  if (j.contains("completed")) {
    const auto& c = j.at("completed");
    std::cout << to_dot(partial_action_from_json(c), c.at("marked").get<std::uint32_t>());
  } else if (j.contains("base")) {
    std::cout << to_dot(automaton_from_json(j));
  } else if (j.contains("marked")) {
    std::cout << to_dot(partial_action_from_json(j), j.at("marked").get<std::uint32_t>());
  } else {
    std::cout << to_dot(partial_action_from_json(j));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact desk-scale construction of totipotent free-group actions"};
  app.require_subcommand(1);

  std::string config, out, bundle, x = "0", gens, query = "index", word, f1, f2, file;
  int radius = 2, word_len = 6, rank = 2, min_v = 1, max_v = 3;
  long n_max = 16;

  auto* b = app.add_subcommand("build", "run the construction and write a bundle");
  b->add_option("--config", config, "key = value parameter file")->required();
  b->add_option("--out", out, "bundle directory")->required();

  auto* v = app.add_subcommand("verify", "check a bundle (decomposition, totipotency, certificates)");
  v->add_option("bundle", bundle, "bundle directory")->required();
  v->add_option("--out", out, "write verify_report.json here instead of stdout");
  v->add_option("--radius", radius, "orbit ball radius for sampled points");

  auto* e = app.add_subcommand("enumerate-balls", "enumerate partial actions up to isomorphism");
  e->add_option("--rank,-r", rank);
  e->add_option("--min", min_v);
  e->add_option("--max", max_v);
  e->add_option("--out", out, "write g<k>.json and g<k>.dot here");

  auto* s = app.add_subcommand("irs-sample", "orbit ball and stabilizer words of a point");
  s->add_option("bundle", bundle)->required();
  s->add_option("--x", x, "point p/q in [0,1)")->required();
  s->add_option("--radius", radius);
  s->add_option("--word-len", word_len);

  auto* g = app.add_subcommand("subgroup", "Stallings automaton queries");
  g->add_option("--rank,-r", rank);
  g->add_option("--gens", gens, "comma-separated words, e.g. \"a1^2,a2,a1 a2 a1^-1\"");
  g->add_option("--query", query, "index|contains|kernel|automaton|basis|hall|isolation");
  g->add_option("--word", word, "word for --query contains");
  g->add_option("--n-max", n_max, "largest n for --query isolation");

  auto* d = app.add_subcommand("distance", "uniform distance of two maps");
  d->add_option("first", f1)->required();
  d->add_option("second", f2)->required();

  auto* x_dot = app.add_subcommand("export-dot", "DOT rendering of a graph or automaton JSON file");
  x_dot->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*b)
      return cmd_build(config, out);
    if (*v)
      return cmd_verify(bundle, out, radius);
    if (*e)
      return cmd_enumerate(rank, min_v, max_v, out);
    if (*s)
      return cmd_irs(bundle, x, radius, word_len);
    if (*g)
      return cmd_subgroup(rank, gens, query, word, n_max);
    if (*d)
      return cmd_distance(f1, f2);
    if (*x_dot)
      return cmd_export_dot(file);
  } catch (const InsufficientRoom& err) {
    std::cerr << "infeasible: " << err.what() << "\n";
    return kInfeasible;
  } catch (const ConfigError& err) {
    std::cerr << "config: " << err.what() << "\n";
    return kUsage;
  } catch (const MissingFile& err) {
    std::cerr << "missing: " << err.what() << "\n";
    return kUsage;
  } catch (const ParseError& err) {
    std::cerr << "parse: " << err.what() << "\n";
    return kUsage;
  } catch (const CLI::ValidationError& err) {
    std::cerr << err.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "invalid: " << err.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "json: " << err.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
