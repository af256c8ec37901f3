// Command-line front end: graph generation, certificates, spectra, walks,
// connectors, absorbers, reservoir probes, Hamilton-cycle runs and the exact
// oracle. JSON on stdout, diagnostics on stderr.
//
// Exit codes: 0 ok, 2 computation failed or abstained, 64 usage, 65 bad input.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hamexp/absorber.hpp"
#include "hamexp/certify.hpp"
#include "hamexp/config.hpp"
#include "hamexp/connector.hpp"
#include "hamexp/cover.hpp"
#include "hamexp/error.hpp"
#include "hamexp/generators.hpp"
#include "hamexp/graph.hpp"
#include "hamexp/pipeline.hpp"
#include "hamexp/reservoir.hpp"
#include "hamexp/spectral.hpp"
#include "hamexp/walks.hpp"

using json = nlohmann::ordered_json;
using namespace hamexp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompute = 2;
constexpr int kExitUsage = 64;
constexpr int kExitInput = 65;

struct Output {
  std::string path;  // empty = stdout
  void emit(const json& doc) const {
    if (path.empty()) {
      std::cout << doc.dump(2) << "\n";
    } else {
      std::ofstream out(path);
      if (!out) throw InputError("cannot write " + path);
      out << doc.dump(2) << "\n";
    }
  }
};

uint64_t parse_seed(const std::string& s) {
  if (s == "random") {
    return std::chrono::steady_clock::now().time_since_epoch().count();
  }
  return std::stoull(s);
}

json graph_meta(const Graph& g) {
  json j;
  j["n"] = g.n;
  j["m"] = g.edge_count();
  j["d_min"] = g.d_min;
  j["d_max"] = g.d_max;
  j["d_avg"] = g.d_avg;
  j["bipartite"] = g.bipartite;
  j["connected"] = g.connected();
  return j;
}

std::vector<std::pair<int, int>> load_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::pair<int, int>> pairs;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long a, b;
    if (ls >> a >> b) pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  return pairs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hamexp: Hamilton cycles in regular expanders, with verified structures"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  if (const char* env = std::getenv("HAMEXP_CONFIG")) config_path = env;
  std::string seed_str = "0";
  std::string out_path;
  int threads = 1;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--seed", seed_str, "master seed (or 'random')");
  app.add_option("--out", out_path, "write JSON here instead of stdout");
  app.add_option("--threads", threads, "worker cap (results are schedule-independent)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate instance graphs");
  gen->require_subcommand(1);
  struct {
    int n = 5, k = 2, d = 3;
    double p = 0.5;
    std::string graph_in, out = "graph.el";
    std::vector<int> orders;
    std::vector<std::string> gens;
    bool bipartite = false;
  } g_args;
  auto* gk = gen->add_subcommand("kneser", "Kneser graph K(n, k)");
  gk->add_option("n", g_args.n)->required();
  gk->add_option("k", g_args.k)->required();
  gk->add_option("--out", g_args.out);
  auto* gc = gen->add_subcommand("cayley", "abelian Cayley graph");
  gc->add_option("--orders", g_args.orders, "cyclic factor orders")->required();
  gc->add_option("--gens", g_args.gens, "generators, comma-separated coordinates")->required();
  gc->add_option("--out", g_args.out);
  auto* gr = gen->add_subcommand("regular", "random d-regular graph");
  gr->add_option("n", g_args.n)->required();
  gr->add_option("d", g_args.d)->required();
  gr->add_flag("--bipartite", g_args.bipartite);
  gr->add_option("--out", g_args.out);
  auto* gp = gen->add_subcommand("percolate", "keep each edge with probability p");
  gp->add_option("graph", g_args.graph_in)->required();
  gp->add_option("p", g_args.p)->required();
  gp->add_option("--out", g_args.out);
  auto* gg = gen->add_subcommand("coset-glue", "per-coset pair batches plus matching");
  struct {
    std::string graph, cosets, sides;
    double s_threshold = 1;
  } glue_args;
  gg->add_option("graph", glue_args.graph)->required();
  gg->add_option("cosets", glue_args.cosets, "file: one coset id per vertex")->required();
  gg->add_option("--sides", glue_args.sides, "file: one side (0/1) per vertex (case 2)");
  gg->add_option("--s-threshold", glue_args.s_threshold);

  // certify
  auto* certify = app.add_subcommand("certify", "expansion and far-from-bipartite certificates");
  struct {
    std::string graph;
    bool exhaustive = false;
    long long samples = 2000;
  } c_args;
  certify->add_option("graph", c_args.graph)->required();
  certify->add_flag("--exhaustive", c_args.exhaustive);
  certify->add_option("--samples", c_args.samples);

  // spectra
  auto* spectra = app.add_subcommand("spectra", "extreme eigenvalues of N(G)");
  struct {
    std::string graph;
    double tol = 1e-9;
  } s_args;
  spectra->add_option("graph", s_args.graph)->required();
  spectra->add_option("--tol", s_args.tol);

  // mixing
  auto* mixing = app.add_subcommand("mixing", "step/TV table of the exact walk distribution");
  struct {
    std::string graph;
    int start = 0, t_max = 64;
    double tol = 1e-3;
  } m_args;
  mixing->add_option("graph", m_args.graph)->required();
  mixing->add_option("--start", m_args.start);
  mixing->add_option("--steps", m_args.t_max);
  mixing->add_option("--tol", m_args.tol);

  // walk
  auto* walk = app.add_subcommand("walk", "sampled walks (optionally endpoint-conditioned)");
  struct {
    std::string graph;
    int from = 0, to = -1, ell = 9, count = 1;
    bool exact_law = false;
  } w_args;
  walk->add_option("graph", w_args.graph)->required();
  walk->add_option("--from", w_args.from);
  walk->add_option("--to", w_args.to, "condition the walk to end here");
  walk->add_option("--ell", w_args.ell);
  walk->add_option("--count", w_args.count);
  walk->add_flag("--exact-law", w_args.exact_law, "dump the backward mass tables");

  // connect
  auto* connect_cmd = app.add_subcommand("connect", "disjoint conditioned paths between pairs");
  struct {
    std::string graph, pairs;
    int ell = 9;
  } cn_args;
  connect_cmd->add_option("graph", cn_args.graph)->required();
  connect_cmd->add_option("pairs", cn_args.pairs, "two-column endpoint file")->required();
  connect_cmd->add_option("--ell", cn_args.ell);

  // absorb
  auto* absorb_cmd = app.add_subcommand("absorb", "build an absorber and answer absorb queries");
  struct {
    std::string graph, queries;
    std::string kind = "general";
    int m = 8, m0 = 1, ell = 5;
  } a_args;
  absorb_cmd->add_option("graph", a_args.graph)->required();
  absorb_cmd->add_option("--kind", a_args.kind)->check(CLI::IsMember({"general", "bipartite"}));
  absorb_cmd->add_option("--reservoir", a_args.m, "general form: reservoir size");
  absorb_cmd->add_option("--m0", a_args.m0, "bipartite form: template scale");
  absorb_cmd->add_option("--ell", a_args.ell);
  absorb_cmd->add_option("--queries", a_args.queries,
                         "file of R' sets, one whitespace-separated set per line");

  // reservoir
  auto* reservoir_cmd = app.add_subcommand("reservoir", "sampling and expansion probes");
  struct {
    std::string graph;
    double p = 0.1, mu = 1.0, gamma = 0.5, s = 2.0;
    int ell = 6, trials = 50;
    std::string probe = "reachable";
  } r_args;
  reservoir_cmd->add_option("graph", r_args.graph)->required();
  reservoir_cmd->add_option("--probe", r_args.probe)
      ->check(CLI::IsMember({"reachable", "robust-expansion", "sample"}));
  reservoir_cmd->add_option("--p", r_args.p);
  reservoir_cmd->add_option("--mu", r_args.mu);
  reservoir_cmd->add_option("--gamma", r_args.gamma);
  reservoir_cmd->add_option("--s", r_args.s);
  reservoir_cmd->add_option("--ell", r_args.ell);
  reservoir_cmd->add_option("--trials", r_args.trials);

  // hamilton
  auto* hamilton = app.add_subcommand("hamilton", "end-to-end Hamilton cycle attempt");
  struct {
    std::string graph;
  } h_args;
  hamilton->add_option("graph", h_args.graph)->required();

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "exact Hamiltonicity decision (n <= 22)");
  struct {
    std::string graph;
  } o_args;
  oracle_cmd->add_option("graph", o_args.graph)->required();

  // bench
  auto* bench = app.add_subcommand("bench", "quick single-process timings");
  struct {
    int n = 2048, d = 32;
  } b_args;
  bench->add_option("--n", b_args.n);
  bench->add_option("--d", b_args.d);

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig config;
    if (!config_path.empty()) config = PipelineConfig::from_file(config_path);
    config.master_seed = parse_seed(seed_str);
    config.threads = threads;
    config.validate();
    const uint64_t seed = config.master_seed;
    Output out{out_path};

    if (gen->parsed()) {
      Graph g;
      json meta;
      if (gk->parsed()) {
        g = kneser(g_args.n, g_args.k);
        meta["kind"] = "kneser";
        meta["params"] = {{"n", g_args.n}, {"k", g_args.k}};
        int k = g_args.k, t = g_args.n - 2 * k;
        if (t >= 1) {
          meta["lambda_formula"] = {{"d", g.d_max},
                                    {"lambda_over_d", 1.0 - static_cast<double>(t) / (k + t)}};
        }
      } else if (gc->parsed()) {
        std::vector<std::vector<int>> gens;
        for (const auto& s : g_args.gens) {
          std::vector<int> t;
          std::istringstream ss(s);
          std::string tok;
          while (std::getline(ss, tok, ',')) t.push_back(std::stoi(tok));
          gens.push_back(t);
        }
        g = cayley_abelian(g_args.orders, gens);
        meta["kind"] = "cayley";
        meta["orders"] = g_args.orders;
      } else if (gr->parsed()) {
        g = g_args.bipartite ? random_regular_bipartite(g_args.n, g_args.d, seed)
                             : random_regular(g_args.n, g_args.d, seed);
        meta["kind"] = g_args.bipartite ? "regular-bipartite" : "regular";
        meta["seed"] = seed;
      } else if (gp->parsed()) {
        Graph base = load_graph(g_args.graph_in);
        g = percolate(base, g_args.p, seed);
        meta["kind"] = "percolate";
        meta["p"] = g_args.p;
        meta["seed"] = seed;
      } else if (gg->parsed()) {
        Graph base = load_graph(glue_args.graph);
        auto load_ints = [](const std::string& p) {
          std::ifstream in(p);
          if (!in) throw InputError("cannot open " + p);
          std::vector<int> v;
          int x;
          while (in >> x) v.push_back(x);
          return v;
        };
        std::vector<int> cosets = load_ints(glue_args.cosets);
        CosetGlueResult glue =
            glue_args.sides.empty()
                ? coset_euler_glue(base, cosets, glue_args.s_threshold, seed)
                : coset_euler_glue_bipartite(base, cosets, load_ints(glue_args.sides),
                                             glue_args.s_threshold, seed);
        json doc;
        doc["tour"] = glue.tour;
        doc["matching"] = json::array();
        for (auto [u, v] : glue.matching) doc["matching"].push_back({u, v});
        doc["per_coset_pairs"] = json::array();
        for (const auto& batch : glue.per_coset_pairs) {
          json jb = json::array();
          for (auto [a, b] : batch) jb.push_back({a, b});
          doc["per_coset_pairs"].push_back(jb);
        }
        out.emit(doc);
        return kExitOk;
      }
      save_graph(g, g_args.out);
      meta["graph"] = graph_meta(g);
      std::ofstream side(g_args.out + ".meta.json");
      side << json(meta).dump(2) << "\n";
      json doc;
      doc["written"] = g_args.out;
      doc["meta"] = meta;
      out.emit(doc);
      return kExitOk;
    }

    if (certify->parsed()) {
      Graph g = load_graph(c_args.graph);
      ExpansionCertificate cert = expansion_certificate(g, c_args.samples, seed);
      FarFromBipartiteReport far =
          far_from_bipartite(g, c_args.exhaustive ? FarMode::Exhaustive : FarMode::Auto, seed);
      json doc;
      doc["rho_lower"] = cert.rho_lower;
      doc["rho_upper"] = cert.rho_upper;
      doc["cuts_tested"] = cert.cuts_tested;
      doc["worst_cut"] = cert.worst_cut;
      doc["connected"] = cert.connected;
      doc["exhaustive"] = cert.exhaustive;
      doc["eps"] = far.eps;
      doc["eps_spectral"] = far.eps_spectral;
      doc["eps_lower"] = far.eps_lower();
      out.emit(doc);
      return kExitOk;
    }

    if (spectra->parsed()) {
      Graph g = load_graph(s_args.graph);
      SpectralSummary s = spectral_summary(g, s_args.tol);
      json doc;
      doc["lambda2"] = s.lambda2;
      doc["lambda_n"] = s.lambda_n;
      doc["method"] = s.method;
      doc["residual"] = s.residual;
      out.emit(doc);
      return kExitOk;
    }

    if (mixing->parsed()) {
      Graph g = load_graph(m_args.graph);
      MixingCurve curve = empirical_mixing(g, m_args.start, m_args.t_max, m_args.tol);
      // two-column step/TV table
      std::ostringstream table;
      for (size_t t = 0; t < curve.tv.size(); ++t) table << t << " " << curve.tv[t] << "\n";
      if (out_path.empty()) {
        std::cout << table.str();
      } else {
        std::ofstream f(out_path);
        f << table.str();
      }
      std::cerr << "first step with TV <= " << m_args.tol << ": " << curve.first_below_tol << "\n";
      return kExitOk;
    }

    if (walk->parsed()) {
      Graph g = load_graph(w_args.graph);
      json doc;
      if (w_args.to >= 0) {
        ConditionedSampler s = build_conditioned(g, w_args.to, w_args.ell);
        if (w_args.exact_law) {
          doc["target"] = w_args.to;
          doc["length"] = w_args.ell;
          doc["f_tables"] = s.f;
          doc["log_norm"] = s.log_norm;
        } else {
          Rng rng(seed);
          doc["walks"] = json::array();
          for (int i = 0; i < w_args.count; ++i) {
            Walk w = sample_conditioned(s, w_args.from, rng);
            doc["walks"].push_back(w.vertices);
          }
        }
      } else {
        Rng rng(seed);
        doc["walks"] = json::array();
        for (int i = 0; i < w_args.count; ++i)
          doc["walks"].push_back(random_walk(g, w_args.from, w_args.ell, rng).vertices);
      }
      out.emit(doc);
      return kExitOk;
    }

    if (connect_cmd->parsed()) {
      Graph g = load_graph(cn_args.graph);
      PairBatch batch;
      batch.pairs = load_pairs(cn_args.pairs);
      batch.length = cn_args.ell;
      batch.bipartite_mode = g.bipartite;
      for (auto& [a, b] : batch.pairs) {
        batch.forbidden.push_back(a);
        batch.forbidden.push_back(b);
        if (batch.bipartite_mode && g.side[a] != 0) std::swap(a, b);
      }
      std::sort(batch.forbidden.begin(), batch.forbidden.end());
      batch.forbidden.erase(std::unique(batch.forbidden.begin(), batch.forbidden.end()),
                            batch.forbidden.end());
      ConnectorConfig ccfg;
      ccfg.last_step_threshold = config.last_step_threshold;
      ccfg.copies_r = config.copies_r;
      ccfg.retry_budget = config.retry_connector;
      ConnectResult r = connect(g, batch, ccfg, seed);
      json doc;
      doc["length"] = r.length;
      doc["rounds_used"] = r.rounds_used;
      doc["paths"] = r.paths;
      doc["layer_alpha"] = json::array();
      for (const auto& rep : r.layer_reports) doc["layer_alpha"].push_back(rep.alpha_observed);
      out.emit(doc);
      return kExitOk;
    }

    if (absorb_cmd->parsed()) {
      Graph g = load_graph(a_args.graph);
      AbsorberParams params;
      params.kind = a_args.kind == "bipartite" ? AbsorberKind::Bipartite : AbsorberKind::General;
      params.reservoir_size = a_args.m;
      params.m0 = a_args.m0;
      params.ell = a_args.ell;
      params.template_regularity = config.template_regularity;
      Absorber abs = build_absorber(g, params, {}, seed);
      json doc;
      doc["kind"] = a_args.kind;
      doc["x"] = abs.x_endpoint;
      doc["y"] = abs.y_endpoint;
      doc["reservoir"] = abs.reservoir;
      doc["vertex_set"] = abs.vertex_set;
      doc["alpha_observed"] = abs.vh_report.alpha_observed;
      doc["queries"] = json::array();
      if (!a_args.queries.empty()) {
        std::ifstream qf(a_args.queries);
        if (!qf) throw InputError("cannot open " + a_args.queries);
        std::string line;
        while (std::getline(qf, line)) {
          std::istringstream ls(line);
          std::vector<int> rp;
          int v;
          while (ls >> v) rp.push_back(v);
          json q;
          q["r_prime"] = rp;
          try {
            q["path"] = absorb(abs, rp);
            q["ok"] = true;
          } catch (const std::exception& e) {
            q["ok"] = false;
            q["error"] = e.what();
          }
          doc["queries"].push_back(q);
        }
      }
      out.emit(doc);
      return kExitOk;
    }

    if (reservoir_cmd->parsed()) {
      Graph g = load_graph(r_args.graph);
      json doc;
      if (r_args.probe == "sample") {
        Reservoir res = sample_reservoir(g, r_args.p, {}, seed);
        doc["size"] = res.vertices.size();
        doc["declared_D"] = res.declared_D;
        doc["declared_ell"] = res.declared_ell;
      } else {
        ProbeReport rep;
        std::vector<int> all(g.n);
        for (int v = 0; v < g.n; ++v) all[v] = v;
        if (r_args.probe == "reachable")
          rep = reachable_probe(g, all, r_args.mu, r_args.ell, r_args.trials, seed);
        else
          rep = robust_vertex_expansion_probe(g, r_args.gamma, r_args.s, r_args.trials, seed);
        doc["pass"] = rep.pass;
        doc["trials"] = rep.trials;
        doc["worst_margin"] = rep.worst_margin;
        if (rep.witness) {
          json w;
          w["U"] = rep.witness->U;
          w["F"] = json::array();
          for (auto [u, v] : rep.witness->F) w["F"].push_back({u, v});
          w["value"] = rep.witness->value;
          doc["witness"] = w;
        } else {
          doc["witness"] = nullptr;
        }
      }
      out.emit(doc);
      return kExitOk;
    }

    if (hamilton->parsed()) {
      Graph g = load_graph(h_args.graph);
      HamiltonResult r = hamilton_cycle(g, config, seed);
      json doc;
      doc["outcome"] = r.outcome == HamiltonResult::Outcome::Cycle ? "cycle" : "failure";
      doc["route"] = r.route;
      doc["cycle"] = r.cycle;
      doc["certain_non_hamiltonian"] = r.certain_non_hamiltonian;
      doc["failure_reason"] = r.failure_reason;
      for (const auto& d : r.diagnostics)
        std::cerr << "[stage] " << d.stage << " " << d.seconds << "s retries=" << d.retries << " "
                  << d.note << "\n";
      out.emit(doc);
      return r.outcome == HamiltonResult::Outcome::Cycle ? kExitOk : kExitCompute;
    }

    if (oracle_cmd->parsed()) {
      Graph g = load_graph(o_args.graph);
      OracleResult r = exact_oracle(g);
      json doc;
      doc["hamiltonian"] = r.hamiltonian;
      doc["witness"] = r.witness;
      out.emit(doc);
      return kExitOk;
    }

    if (bench->parsed()) {
      json doc;
      auto time_it = [](auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      };
      Graph g;
      doc["gen_seconds"] = time_it([&] { g = random_regular(b_args.n, b_args.d, seed); });
      doc["certificate_seconds"] =
          time_it([&] { expansion_certificate(g, 200, seed); });
      doc["mixing_seconds"] = time_it([&] { empirical_mixing(g, 0, 32); });
      ConditionedSampler s;
      doc["conditioned_table_seconds"] =
          time_it([&] { s = build_conditioned(g, 0, 9); });
      out.emit(doc);
      return kExitOk;
    }

    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ComputeError& e) {
    std::cerr << "compute error: " << e.what() << "\n";
    return kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  }
}
