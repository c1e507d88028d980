#include "uconvex/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "uconvex/error.hpp"

namespace uconvex {

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
};

const std::set<std::string> kRandomized{"check-convexity", "modulus", "busemann", "clarkson",
                                        "hull", "opial", "coconvex-probe", "cone-demo"};

std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string render_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
    os << '\n';
  }
  return os.str();
}

// key,value rows for the scalar fields of a result object.
Table scalar_table(const Json& j) {
  Table t{{"key", "value"}, {}};
  for (const auto& [k, v] : j.items()) {
    if (v.is_primitive()) t.rows.push_back({k, v});
  }
  return t;
}

Table report_table(const CheckReport& r) {
  return {{"property", "p", "samples", "violations", "worst", "status"},
          {{r.property, r.p, r.samples, r.violations, r.samples ? Json(r.worst) : Json(nullptr),
            to_string(r.status)}}};
}

template <class T>
T require(const std::optional<T>& v, const char* what) {
  if (!v) throw ConfigError(std::string("missing required ") + what);
  return *v;
}

const Json& input_key(const RunConfig& cfg, const char* key) {
  if (!cfg.input.contains(key)) throw ConfigError(std::string("input is missing \"") + key + "\"");
  return cfg.input.at(key);
}

SpaceHandle space_of(const RunConfig& cfg, const char* fallback) {
  try {
    return parse_space(cfg.space.value_or(fallback));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

Exponent exponent_of(const std::optional<std::string>& text, const char* fallback) {
  try {
    return Exponent::parse(text.value_or(fallback));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

double finite_p(const RunConfig& cfg, const char* fallback) {
  const auto e = exponent_of(cfg.p, fallback);
  if (e.is_infinite()) throw ConfigError("--p must be finite for " + cfg.command);
  return e.value();
}

SamplingOptions sampling(const RunConfig& cfg) {
  SamplingOptions o;
  o.samples = cfg.samples.value_or(10000);
  o.seed = *cfg.seed;
  o.threads = cfg.threads;
  o.radius = cfg.radius.value_or(1.0);
  o.tol = cfg.tol.value_or(1e-9);
  return o;
}

std::vector<double> eps_grid(const RunConfig& cfg, std::vector<double> fallback) {
  return cfg.eps.empty() ? fallback : cfg.eps;
}

Json report_doc(Json doc, const CheckReport& r, Table& table, int& exit_code) {
  doc["report"] = to_json(r);
  table = report_table(r);
  if (r.status == CheckStatus::fail) exit_code = kExitViolation;
  return doc;
}

Json execute(const RunConfig& cfg, Table& table, int& exit_code) {
  const std::string& cmd = cfg.command;
  Json doc;
  doc["schema"] = kSchema;
  doc["command"] = cmd;
  if (cfg.seed) doc["seed"] = *cfg.seed;

  if (cmd == "check-convexity") {
    const auto s = space_of(cfg, "euclidean:2");
    doc["space"] = s->describe();
    const auto prop = cfg.property.value_or("p-convexity");
    doc["property"] = prop;
    const auto opts = sampling(cfg);
    if (prop == "p-convexity") {
      return report_doc(doc, check_p_convexity(s, exponent_of(cfg.p, "2"), opts), table, exit_code);
    }
    if (prop == "l-convexity" || prop == "orlicz-convexity") {
      const auto L = OrliczFunction::parse(cfg.orlicz.value_or("pow:2"));
      return report_doc(doc, check_l_convexity(s, L, prop == "orlicz-convexity", opts), table,
                        exit_code);
    }
    if (prop == "p-implies") {
      const auto r = check_p_implies_pprime(s, exponent_of(cfg.p, "2"), exponent_of(cfg.pprime, "inf"),
                                            eps_grid(cfg, {0.1, 0.25, 0.5, 1.0}), opts);
      return report_doc(doc, r, table, exit_code);
    }
    if (prop == "nearly-uniform") {
      const auto family = points_from_json(s, input_key(cfg, "family"));
      const auto center = point_from_json(s, input_key(cfg, "center"));
      const double eps = cfg.eps.empty() ? 0.1 : cfg.eps.front();
      const auto r = check_nearly_uniform(s, family, center, eps, cfg.depth.value_or(4), *cfg.seed);
      return report_doc(doc, r, table, exit_code);
    }
    throw ConfigError("unknown --property " + prop);
  }

  if (cmd == "modulus") {
    const auto s = space_of(cfg, "euclidean:2");
    doc["space"] = s->describe();
    const auto t = estimate_modulus(s, exponent_of(cfg.p, "2"), eps_grid(cfg, {0.1, 0.25, 0.5, 1.0}),
                                    sampling(cfg));
    doc["modulus"] = to_json(t);
    table.header = {"epsilon", "rho_raw", "rho_hat", "rho_tilde", "samples", "attempts"};
    for (const auto& row : doc["modulus"]["rows"]) {
      table.rows.push_back({row["epsilon"], row["rho_raw"], row["rho_hat"], row["rho_tilde"],
                            row["samples"], row["attempts"]});
    }
    return doc;
  }

  if (cmd == "busemann") {
    const auto s = space_of(cfg, "euclidean:2");
    doc["space"] = s->describe();
    return report_doc(doc, check_busemann(s, exponent_of(cfg.p, "1"), sampling(cfg)), table,
                      exit_code);
  }

  if (cmd == "clarkson") {
    const double p = finite_p(cfg, "2");
    if (!(p > 1.0)) throw ConfigError("clarkson needs p > 1");
    doc["constant"] = clarkson_constant(p);
    return report_doc(doc, check_clarkson(p, sampling(cfg)), table, exit_code);
  }

  if (cmd == "hull") {
    const auto s = space_of(cfg, "euclidean:2");
    doc["space"] = s->describe();
    HullOptions h;
    h.seed = *cfg.seed;
    const auto hull = build_hull(s, points_from_json(s, input_key(cfg, "points")), cfg.depth.value_or(3), h);
    doc["depth"] = hull.depth;
    doc["level_sizes"] = hull.level_sizes;
    doc["skipped_pairs"] = hull.skipped_pairs;
    Json q = Json::array();
    if (cfg.input.contains("queries")) {
      for (const auto& x : points_from_json(s, cfg.input.at("queries"))) {
        const auto np = dist_to_set(s, x, hull);
        q.push_back(Json{{"query", to_json(x)}, {"distance", np.distance}, {"nearest", to_json(np.point)},
                         {"index", np.index}});
      }
    }
    doc["queries"] = q;
    table.header = {"level", "size"};
    for (std::size_t i = 0; i < hull.level_sizes.size(); ++i) table.rows.push_back({i, hull.level_sizes[i]});
    return doc;
  }

  if (cmd == "project") {
    const auto s = space_of(cfg, "euclidean:2");
    doc["space"] = s->describe();
    const auto q = point_from_json(s, input_key(cfg, "q"));
    const auto a = point_from_json(s, input_key(cfg, "a"));
    const auto b = point_from_json(s, input_key(cfg, "b"));
    if (!s->geodesic_supported(a, b)) throw ConfigError("segment [a, b] is not a supported geodesic");
    const auto pr = project_to_segment(s, q, a, b, cfg.tol.value_or(1e-12));
    doc["point"] = to_json(pr.point);
    doc["t"] = pr.t;
    doc["distance"] = pr.distance;
    doc["fallback"] = pr.fallback;
    table = scalar_table(doc);
    return doc;
  }

  if (cmd == "wasserstein") {
    const auto s = space_of(cfg, "euclidean:1");
    doc["space"] = s->describe();
    const auto mu = measure_from_json(s, input_key(cfg, "mu"));
    const auto nu = measure_from_json(s, input_key(cfg, "nu"));
    const auto p = exponent_of(cfg.p, "1");
    doc["p"] = p.str();
    table.header = {"i", "j", "mass"};
    if (p.is_infinite()) {
      doc["value"] = wasserstein_inf(s, mu, nu);
      return doc;
    }
    const auto r = wasserstein_p(s, mu, nu, p.value());
    doc["value"] = r.value;
    doc["w_inf"] = wasserstein_inf(s, mu, nu);
    doc["plan"] = to_json(r.plan);
    for (std::size_t i = 0; i < r.plan.rows; ++i)
      for (std::size_t j = 0; j < r.plan.cols; ++j)
        if (r.plan.at(i, j) > 0.0) table.rows.push_back({i, j, r.plan.at(i, j)});
    return doc;
  }

  if (cmd == "barycenter" || cmd == "orlicz-barycenter") {
    const auto s = space_of(cfg, "euclidean:2");
    doc["space"] = s->describe();
    const auto mu = measure_from_json(s, input_key(cfg, "mu"));
    DescentOptions d;
    d.tol = cfg.tol.value_or(1e-10);
    BarycenterResult r;
    std::function<double(const Point&)> objective;
    if (cmd == "barycenter") {
      const double p = finite_p(cfg, "2");
      doc["p"] = Exponent::finite(p).str();
      r = p == 1.0 ? barycenter_median(s, mu, d) : barycenter_p(s, mu, p, d);
      objective = [&, p](const Point& y) { return variance(s, mu, y, p); };
    } else {
      const auto L = OrliczFunction::parse(cfg.orlicz.value_or("pow:" + cfg.p.value_or("2")));
      doc["orlicz"] = L.descriptor();
      r = barycenter_orlicz(s, mu, L, d);
      objective = [&, L](const Point& y) { return orlicz_distance_to_dirac(s, mu, y, L); };
    }
    // Optional grid oracle over the support's bounding box (euclidean:1 and :2).
    if (cfg.input.contains("grid")) {
      const auto g = cfg.input.at("grid").get<std::size_t>();
      if (s->kind() != SpaceKind::euclidean || s->chart_dimension() > 2 || g < 2) {
        throw ConfigError("grid oracle needs euclidean:1 or euclidean:2 and grid >= 2");
      }
      const std::size_t dim = s->chart_dimension();
      std::vector<double> lo(dim, INFINITY), hi(dim, -INFINITY);
      for (const auto& x : mu.support()) {
        const auto& c = as_vector(x).coords;
        for (std::size_t k = 0; k < dim; ++k) {
          lo[k] = std::min(lo[k], c[k]);
          hi[k] = std::max(hi[k], c[k]);
        }
      }
      double best = INFINITY;
      const std::size_t gy = dim == 2 ? g : 1;
      for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < gy; ++j) {
          std::vector<double> c{lo[0] + (hi[0] - lo[0]) * double(i) / double(g - 1)};
          if (dim == 2) c.push_back(lo[1] + (hi[1] - lo[1]) * double(j) / double(g - 1));
          best = std::min(best, objective(vec(c)));
        }
      }
      r.oracle_gap = r.value - best;
    }
    doc["result"] = to_json(r);
    table = scalar_table(doc["result"]);
    return doc;
  }

  if (cmd == "circumcenter") {
    const auto s = space_of(cfg, "euclidean:2");
    doc["space"] = s->describe();
    DescentOptions d;
    d.tol = cfg.tol.value_or(1e-10);
    const auto r = circumcenter(s, points_from_json(s, input_key(cfg, "points")), d);
    doc["result"] = to_json(r);
    table = scalar_table(doc["result"]);
    return doc;
  }

  const bool seq_cmd = cmd == "asymptotic-center" || cmd == "opial" || cmd == "coconvex-probe" ||
                       cmd == "banach-saks" || cmd == "dyadic-probe";
  if (seq_cmd) {
    const auto s = space_of(cfg, "euclidean:8");
    doc["space"] = s->describe();
    const auto seq = sequence_from_json(s, input_key(cfg, "sequence"));
    doc["sequence"] = Json{{"kind", seq.name()}, {"length", seq.length}};
    std::optional<std::size_t> tail;
    if (cfg.input.contains("tail_start")) tail = cfg.input.at("tail_start").get<std::size_t>();

    if (cmd == "asymptotic-center") {
      const auto r = asymptotic_center(s, seq, tail.value_or(seq.length / 2), cfg.tol.value_or(1e-10));
      doc["center"] = to_json(r.center);
      doc["omega"] = r.omega;
      doc["tail_start"] = r.tail_start;
      doc["converged"] = r.converged;
      table = scalar_table(doc);
      return doc;
    }
    if (cmd == "opial") {
      const auto x = point_from_json(s, input_key(cfg, "weak_limit"));
      const auto competitors = points_from_json(s, input_key(cfg, "competitors"));
      const auto probes = cfg.input.contains("probes") ? points_from_json(s, cfg.input.at("probes")) : competitors;
      TailOptions t;
      t.tol = cfg.tol.value_or(1e-6);
      t.tail_start = tail;
      t.seed = *cfg.seed;
      t.threads = cfg.threads;
      const auto weak = weak_seq_limit_test(s, seq, x, probes, t);
      const auto op = opial_check(s, seq, x, competitors, tail);
      doc["weak_limit_test"] = to_json(weak);
      doc["report"] = to_json(op);
      table = report_table(weak);
      table.rows.push_back(report_table(op).rows.front());
      if (weak.status == CheckStatus::fail || op.status == CheckStatus::fail) exit_code = kExitViolation;
      return doc;
    }
    if (cmd == "coconvex-probe") {
      CoconvexOptions o;
      o.hull_depth = cfg.depth.value_or(6);
      o.tol = cfg.tol.value_or(1e-3);
      o.tail_start = tail;
      o.seed = *cfg.seed;
      o.threads = cfg.threads;
      const auto candidates = points_from_json(s, input_key(cfg, "candidates"));
      const auto r = coconvex_limit_probe(s, seq, candidates, o);
      doc["supported"] = r.supported;
      doc["distances"] = r.distances;
      doc["hull_sizes"] = r.hull_sizes;
      doc["report"] = to_json(r.report);
      table.header = {"candidate", "subsequence", "distance"};
      for (std::size_t c = 0; c < r.distances.size(); ++c)
        for (std::size_t k = 0; k < r.distances[c].size(); ++k) table.rows.push_back({c, k, r.distances[c][k]});
      if (r.report.status == CheckStatus::fail) exit_code = kExitViolation;
      return doc;
    }
    if (cmd == "banach-saks") {
      const double p = finite_p(cfg, "2");
      std::vector<std::size_t> prefixes;
      if (cfg.input.contains("prefix_lengths")) {
        prefixes = cfg.input.at("prefix_lengths").get<std::vector<std::size_t>>();
      } else {
        for (std::size_t N = 1; N <= seq.length; N *= 2) prefixes.push_back(N);
      }
      std::optional<Point> ref;
      if (cfg.input.contains("reference")) ref = point_from_json(s, cfg.input.at("reference"));
      const auto r = banach_saks_experiment(s, seq, p, prefixes, ref, cfg.tol.value_or(1e-10));
      doc["p"] = Exponent::finite(p).str();
      doc["reference"] = to_json(r.reference);
      doc["reference_from_center"] = r.reference_from_center;
      doc["prefix_lengths"] = r.prefix_lengths;
      doc["distances"] = r.distances;
      doc["values"] = r.values;
      doc["decreasing"] = r.decreasing;
      doc["converged"] = r.converged;
      table.header = {"N", "distance", "value"};
      for (std::size_t i = 0; i < r.distances.size(); ++i)
        table.rows.push_back({r.prefix_lengths[i], r.distances[i], r.values[i]});
      return doc;
    }
    // dyadic-probe
    const double p = finite_p(cfg, "2");
    std::size_t levels = cfg.levels.value_or(0);
    if (levels == 0) {
      while ((std::size_t{2} << levels) <= seq.length) ++levels;
    }
    const auto r = dyadic_merge_probe(s, seq, p, levels, cfg.tol.value_or(1e-10));
    doc["p"] = Exponent::finite(p).str();
    Json lv = Json::array();
    table.header = {"level", "block_size", "value"};
    for (const auto& l : r.levels) {
      lv.push_back(Json{{"level", l.level}, {"block_size", l.block_size}, {"value", l.value},
                        {"block_values", l.block_values}});
      table.rows.push_back({l.level, l.block_size, l.value});
    }
    doc["levels"] = lv;
    doc["nondecreasing"] = r.nondecreasing;
    doc["converged"] = r.converged;
    return doc;
  }

  if (cmd == "cone-demo") {
    const auto r = cone_counterexample_demo(cfg.n.value_or(8), cfg.depth.value_or(6), *cfg.seed, cfg.threads);
    doc["n"] = r.n;
    doc["hull_depth"] = r.hull_depth;
    doc["cos1"] = r.cos1;
    doc["cossq"] = r.cossq;
    doc["margin"] = r.margin;
    doc["inequality_holds"] = r.inequality_holds;
    doc["r_half"] = r.r_half;
    doc["midpoint_direction_norm"] = r.midpoint_direction_norm;
    doc["generator_projection_spread"] = r.generator_projection_spread;
    doc["midpoint_projection_spread"] = r.midpoint_projection_spread;
    doc["supported"] = r.probe.supported;
    doc["coconvex_distances"] = r.probe.distances;
    doc["weak_grid"] = r.weak_grid;
    doc["weak_passes"] = r.weak_passes;
    doc["weak_limit_unique"] = r.weak_limit_unique;
    table.header = {"n", "m", "projection_radius"};
    for (const auto& row : r.rows) table.rows.push_back({row.n, row.m, row.projection_radius});
    return doc;
  }

  throw ConfigError("unknown command: " + cmd);
}

template <class T>
void fill(std::optional<T>& field, const Json& in, const char* key) {
  if (field || !in.contains(key)) return;
  try {
    field = in.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad input key \"") + key + "\": " + e.what());
  }
}

// Numeric exponents in the input may be written as numbers.
void fill_exponent(std::optional<std::string>& field, const Json& in, const char* key) {
  if (field || !in.contains(key)) return;
  const auto& v = in.at(key);
  field = v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "check-convexity", "modulus",         "busemann",          "clarkson",
      "hull",            "project",         "wasserstein",       "barycenter",
      "circumcenter",    "orlicz-barycenter", "asymptotic-center", "opial",
      "coconvex-probe",  "cone-demo",       "banach-saks",       "dyadic-probe"};
  return names;
}

void apply_defaults(RunConfig& cfg) {
  const Json& in = cfg.input;
  fill(cfg.space, in, "space");
  fill_exponent(cfg.p, in, "p");
  fill_exponent(cfg.pprime, in, "pprime");
  fill(cfg.samples, in, "samples");
  fill(cfg.seed, in, "seed");
  fill(cfg.tol, in, "tol");
  fill(cfg.n, in, "n");
  fill(cfg.depth, in, "depth");
  fill(cfg.levels, in, "levels");
  fill(cfg.property, in, "property");
  fill(cfg.orlicz, in, "orlicz");
  fill(cfg.radius, in, "radius");
  if (cfg.eps.empty() && in.contains("eps")) {
    const auto& e = in.at("eps");
    cfg.eps = e.is_array() ? e.get<std::vector<double>>() : std::vector<double>{e.get<double>()};
  }
  if (!cfg.seed) {
    if (const char* env = std::getenv("UCONVEX_SEED"); env && *env) {
      try {
        std::size_t used = 0;
        cfg.seed = std::stoull(env, &used);
        if (env[used] != '\0') throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ConfigError(std::string("UCONVEX_SEED is not an unsigned integer: ") + env);
      }
    }
  }
}

RunResult run(const RunConfig& cfg) {
  if (cfg.tol && !(*cfg.tol > 0.0)) throw ConfigError("--tol must be > 0");
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("--format must be json or csv");
  if (kRandomized.count(cfg.command) && !cfg.seed) {
    throw ConfigError(cfg.command + " is randomized: pass --seed or set UCONVEX_SEED");
  }
  if (cfg.threads == 0) throw ConfigError("--threads must be >= 1");
  Table table;
  int exit_code = 0;
  Json doc;
  try {
    doc = execute(cfg, table, exit_code);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed input: ") + e.what());
  }
  RunResult r;
  r.exit_code = exit_code;
  if (cfg.format == "json") {
    r.output = doc.dump(2) + "\n";
  } else {
    r.output = render_csv(table.header.empty() ? scalar_table(doc) : table);
  }
  return r;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"uconvex: numerical experiments on uniformly convex geodesic metric spaces"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string input_path;
  std::string seed_text;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--space", cfg.space, "space descriptor: euclidean:N, lp:N:p, cone:<base>");
    sub->add_option("--p", cfg.p, "exponent (real >= 1 or inf)");
    sub->add_option("--eps", cfg.eps, "epsilon grid")->delimiter(',');
    sub->add_option("--samples", cfg.samples, "sample count");
    sub->add_option("--seed", seed_text, "random seed (fallback: UCONVEX_SEED)");
    sub->add_option("--tol", cfg.tol, "tolerance");
    sub->add_option("--format", cfg.format, "json or csv");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--threads", cfg.threads, "worker threads");
    sub->add_option("--n", cfg.n, "sequence length / dimension");
    sub->add_option("--depth", cfg.depth, "hull depth");
    sub->add_option("--levels", cfg.levels, "dyadic levels");
    sub->add_option("--property", cfg.property,
                    "p-convexity | l-convexity | orlicz-convexity | p-implies | nearly-uniform");
    sub->add_option("--pprime", cfg.pprime, "target exponent for p-implies");
    sub->add_option("--orlicz", cfg.orlicz, "Orlicz function: pow:<p> or exp-minus-one");
    sub->add_option("--radius", cfg.radius, "sampling radius");
    sub->add_option("--input", input_path, "JSON input (data and config defaults)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!seed_text.empty()) {
      std::size_t used = 0;
      try {
        cfg.seed = std::stoull(seed_text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != seed_text.size() || seed_text.front() == '-') {
        throw ConfigError("--seed must be an unsigned integer");
      }
    }
    if (!input_path.empty()) {
      std::ifstream f(input_path);
      if (!f) throw ConfigError("cannot open input " + input_path);
      try {
        cfg.input = Json::parse(f);
      } catch (const Json::exception& e) {
        throw ConfigError("input " + input_path + " is not valid JSON: " + e.what());
      }
      if (!cfg.input.is_object()) throw ConfigError("input must be a JSON object");
    }
    apply_defaults(cfg);
    const auto r = run(cfg);
    if (cfg.out.empty()) {
      std::cout << r.output;
    } else {
      std::ofstream o(cfg.out, std::ios::binary);
      if (!o) throw ConfigError("cannot write " + cfg.out);
      o << r.output;
    }
    return r.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace uconvex
