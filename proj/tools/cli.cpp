#include "opdyn/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "opdyn/classify.hpp"
#include "opdyn/dynamics.hpp"
#include "opdyn/errors.hpp"
#include "opdyn/format.hpp"
#include "opdyn/grammar.hpp"
#include "opdyn/isometry.hpp"
#include "opdyn/powers.hpp"
#include "opdyn/zoo.hpp"

namespace opdyn::cli {

namespace {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json curve_json(const std::vector<std::pair<double, double>>& c) {
  json a = json::array();
  for (const auto& [x, v] : c) a.push_back(json::array({x, v}));
  return a;
}

template <class T>
json index_curve_json(const std::vector<std::pair<Index, T>>& c) {
  json a = json::array();
  for (const auto& [n, v] : c) a.push_back(json::array({n, v}));
  return a;
}

json config_json(const ProbeConfig& c) {
  return {{"n_max", c.n_max},
          {"lambda_samples", c.lambda_samples},
          {"basis_count", c.basis_count},
          {"random_count", c.random_count},
          {"random_support", c.random_support},
          {"seed", format_seed(c.seed)},
          {"adversarial", c.adversarial},
          {"p", c.p},
          {"tolerance", c.tolerance},
          {"divergence_factor", c.divergence_factor}};
}

json verdict_json(const std::string& name, const ClassVerdict& v) {
  json j = {{"probe", name},
            {"class", to_string(v.class_name)},
            {"outcome", to_string(v.outcome)},
            {"horizon", v.horizon},
            {"best_constant", v.best_constant},
            {"certainty", to_string(v.certainty)},
            {"curve", curve_json(v.curve)}};
  json params = json::object();
  for (const auto& [k, val] : v.parameters) params[k] = val;
  j["parameters"] = params;
  if (v.witness) {
    json w = {{"vector", v.witness->vector}, {"at", v.witness->at}, {"value", v.witness->value}};
    if (v.witness->lambda) w["lambda"] = complex_json(*v.witness->lambda);
    j["witness"] = w;
  }
  return j;
}

json ergodic_json(const std::string& name, const ErgodicVerdict& v) {
  json j = {{"probe", name},
            {"mode", to_string(v.mode)},
            {"outcome", to_string(v.outcome)},
            {"horizon", v.horizon},
            {"rate", v.rate},
            {"witness_gap", v.witness_gap},
            {"gaps", index_curve_json(v.gaps)}};
  if (v.mode == ErgodicMode::Weak)
    j["limit"] = complex_json(v.limit);
  else
    j["limit_norm"] = v.limit.real();
  return j;
}

json coverage_json(const CoverageReport& r, bool verbose) {
  json j = {{"probe", "hc"},
            {"R", r.R},
            {"cell", r.cell},
            {"cells_per_axis", r.cells_per_axis},
            {"hit_count", r.hits.size()},
            {"coverage_fraction", r.coverage_fraction},
            {"N_used", r.N_used},
            {"orbit_magnitude_max", r.orbit_magnitude_max},
            {"curve", index_curve_json(r.curve)}};
  if (verbose) {
    json h = json::array();
    for (const auto& [a, b] : r.hits) h.push_back(json::array({a, b}));
    j["hits"] = h;
  }
  return j;
}

struct ProbeResult {
  json doc;
  std::string verdict;  // text comparable with zoo expectations
};

struct Context {
  ParsedOperator op;
  ProbeConfig cfg;
  std::optional<SparseVec> x, y;
};

SparseVec default_x(const Context& c) {
  if (c.x) return *c.x;
  if (c.op.entry) return c.op.entry->ergodic_x;
  return basis_vector(c.op.spec.universe(), c.op.spec.universe().first_index());
}

SparseVec default_y(const Context& c) {
  if (c.y) return *c.y;
  if (c.x) return *c.x;
  if (c.op.entry) return c.op.entry->ergodic_y;
  return basis_vector(c.op.spec.universe(), c.op.spec.universe().first_index());
}

const std::vector<std::string> kClassifyProbes = {"acb", "cb", "kreiss", "me", "order", "pb", "sk", "uk", "we"};

ProbeResult run_classify_probe(const std::string& name, const Context& c) {
  const auto& s = c.op.spec;
  const auto verdict = [&](const ClassVerdict& v) { return ProbeResult{verdict_json(name, v), to_string(v.outcome)}; };
  if (name == "pb") return verdict(power_bounded_probe(s, c.cfg));
  if (name == "cb") return verdict(cesaro_bounded_probe(s, c.cfg));
  if (name == "acb") return verdict(acb_constant(s, c.cfg));
  if (name == "uk") return verdict(uniform_kreiss_probe(s, c.cfg));
  if (name == "kreiss") return verdict(kreiss_resolvent_constant(s, default_deltas(), c.cfg.lambda_samples));
  if (name == "sk") return verdict(strong_kreiss_exp_probe(s, default_radii(), c.cfg.lambda_samples));
  if (name == "me") {
    const auto v = mean_ergodic_probe(s, default_x(c), kErgodicHorizon, c.cfg.p);
    return {ergodic_json(name, v), to_string(v.outcome)};
  }
  if (name == "we") {
    const auto v = weak_ergodic_probe(s, default_x(c), default_y(c), kErgodicHorizon);
    return {ergodic_json(name, v), to_string(v.outcome)};
  }
  const auto m = strict_order(s, 7, c.cfg);
  json j = {{"probe", "order"}, {"m_max", 7}};
  j["strict_order"] = m ? json(*m) : json(nullptr);
  return {j, m ? std::to_string(*m) : "none"};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Flat "key=value" rendering of scalar fields for the text report.
std::string text_line(const json& j) {
  std::string line = j.value("probe", std::string("?"));
  for (const auto& [k, v] : j.items()) {
    if (k == "probe" || v.is_array() || v.is_object()) continue;
    line += "  " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  }
  return line;
}

std::string render(const json& doc, bool as_json) {
  if (as_json) return doc.dump(2) + "\n";
  std::string s = "command: " + doc.at("command").get<std::string>() + "\n";
  if (doc.contains("operator")) s += "operator: " + doc["operator"]["description"].get<std::string>() + "\n";
  for (const auto& p : doc.value("probes", json::array())) s += text_line(p) + "\n";
  for (const auto& e : doc.value("expectations", json::array()))
    s += std::string(e["match"].get<bool>() ? "match" : "MISMATCH") + "  " + e["probe"].get<std::string>() +
         "  expected=" + e["expected"].get<std::string>() + "  actual=" + e["actual"].get<std::string>() + "\n";
  for (const auto& [k, v] : doc.value("timing", json::object()).items()) s += "time " + k + " " + v.dump() + "s\n";
  return s;
}

void sort_probes(json& probes) {
  std::vector<json> v(probes.begin(), probes.end());
  std::stable_sort(v.begin(), v.end(), [](const json& a, const json& b) {
    const auto ka = a.value("probe", std::string());
    const auto kb = b.value("probe", std::string());
    if (ka != kb) return ka < kb;
    return a.value("parameters", json::object()).dump() < b.value("parameters", json::object()).dump();
  });
  probes = json(v);
}

std::string caret_message(const std::string& text, const GrammarError& e) {
  return std::string("parse error ") + e.what() + "\n  " + text + "\n  " + std::string(e.position, ' ') + "^\n";
}

struct Globals {
  bool as_json = false;
  bool timing = false;
  bool verbose = false;
  std::string seed, n_max, out, replay;
  double tol = 0.0;
  bool tol_set = false;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"opdyn: boundedness classes, isometric structure and orbit dynamics of linear operators", "opdyn"};
  app.fallthrough();
  app.footer(
      "Operators: <zoo id> | twoiso | identity[:n=<dim>] | bilateral\n"
      "  bshift:alpha=<a>[,p=<p>]   fshift:alpha=<a>[,p=<p>]\n"
      "  polyshift:p=<c0>,<c1>,...[;dir=fwd|bwd][;side=uni|bi]\n"
      "  matrix:[[<z>,...],...]   diag:[<z>,...]   lblock:theta=<t>\n"
      "  hyper:dim=<d>,ell=<l>[,t1=<a>,t2=<b>]   blocktz:<operator>\n"
      "Scalars: 1.5, -2, 0.5+2i, 3i, -i, cis(<t>)\n"
      "Vectors: [<coef>*]e<k>[@<block>] joined by + or -, dense:[<z>,...], random[:<seed>], adv:<n>\n"
      "Exit codes: 0 ok, 1 expectation mismatch or runtime failure, 2 usage or parse error");
  app.require_subcommand(0, 1);
  Globals g;
  app.add_flag("--json", g.as_json, "emit the JSON report document");
  app.add_option("--seed", g.seed, "random seed, decimal or 0x-hex (default 0xce5a70)");
  app.add_option("--n-max", g.n_max, "probe horizon");
  app.add_option("--tol", g.tol, "isometry tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write the report to this path");
  app.add_option("--replay", g.replay, "rerun the invocation echoed in a JSON report");
  app.add_flag("--timing", g.timing, "record per-probe wall time (breaks byte-identical output)");

  auto* zoo = app.add_subcommand("zoo", "catalogue of named operators");
  auto* zoo_list = zoo->add_subcommand("list", "list entries with their expected verdicts");
  zoo->require_subcommand(1);

  std::string op_text, probes_text, x_text, y_text, pair_text, mode;
  std::string N_text, R_text = "40", cell_text = "1";
  int m_max = 7;
  double p_flag = 0.0;
  bool weak = false;

  auto* classify = app.add_subcommand("classify", "run boundedness probes");
  classify->add_option("operator", op_text, "zoo id or inline operator")->required();
  classify->add_option("--probes", probes_text, "comma list of acb,cb,kreiss,me,order,pb,sk,uk,we");
  classify->add_option("--x", x_text, "vector for ergodic probes");
  classify->add_option("--y", y_text, "second vector for the weak ergodic probe");

  auto* orbit = app.add_subcommand("orbit", "CSV of orbit norms n,norm[,re,im]");
  orbit->add_option("operator", op_text, "zoo id or inline operator")->required();
  orbit->add_option("--x", x_text, "starting vector");
  orbit->add_option("--N", N_text, "last power (default 64)");
  orbit->add_option("--p", p_flag, "norm exponent")->check(CLI::Range(1.0, 1e300));
  orbit->add_option("--pair", pair_text, "also emit <T^n x, y> for this y");

  auto* iso = app.add_subcommand("isometry", "strict m-isometry order, degree profile, covariance forms");
  iso->add_option("operator", op_text, "zoo id or inline operator")->required();
  iso->add_option("--m-max", m_max, "largest order tested")->check(CLI::Range(1, 20));

  auto* probe = app.add_subcommand("probe", "dynamics probes: mixing, chaos, hc, ergodic");
  probe->add_option("mode", mode, "mixing | chaos | hc | ergodic")->required()->check(
      CLI::IsMember({"mixing", "chaos", "hc", "ergodic"}));
  probe->add_option("operator", op_text, "zoo id or inline operator")->required();
  probe->add_option("--N", N_text, "horizon");
  probe->add_option("--R", R_text, "coverage half width");
  probe->add_option("--cell", cell_text, "coverage cell size");
  probe->add_option("--x", x_text, "vector");
  probe->add_option("--y", y_text, "second vector");
  probe->add_flag("--weak", weak, "weak instead of mean ergodicity");
  probe->add_flag("--verbose", g.verbose, "include hit cells in coverage reports");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  if (!g.replay.empty()) {
    std::ifstream in(g.replay);
    if (!in) {
      err << "error: cannot read " << g.replay << "\n";
      return kExitMismatch;
    }
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      err << "error: malformed report: " << e.what() << "\n";
      return kExitUsage;
    }
    if (!doc.contains("replay") || !doc["replay"].contains("args")) {
      err << "error: report carries no replay arguments\n";
      return kExitUsage;
    }
    auto again = doc["replay"]["args"].get<std::vector<std::string>>();
    if (!g.out.empty()) {
      again.push_back("--out");
      again.push_back(g.out);
    }
    return run(again, out, err);
  }
  if (app.get_subcommands().empty()) {
    err << "error: a subcommand is required\n" << app.help();
    return kExitUsage;
  }

  // Echo of the invocation without output-only flags.
  std::vector<std::string> replay_args;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" || args[i] == "--replay") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0 || args[i] == "--timing") continue;
    replay_args.push_back(args[i]);
  }

  const auto emit = [&](const std::string& text) {
    if (g.out.empty()) {
      out << text;
      return true;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) return false;
    f << text;
    return static_cast<bool>(f);
  };

  try {
    ProbeConfig cfg;
    if (zoo_list->parsed()) {
      json arr = json::array();
      std::string text;
      for (const auto& e : zoo_entries()) {
        json rows = json::array();
        std::string summary;
        for (const auto& r : e.expected) {
          rows.push_back({{"probe", r.probe}, {"expected", r.expected}, {"claim", r.anchor}});
          summary += (summary.empty() ? "" : " ") + r.probe + "=" + r.expected;
        }
        arr.push_back({{"id", e.id}, {"description", e.description}, {"operator", e.spec.describe()},
                       {"expected", rows}, {"notes", e.notes}});
        text += e.id + "\t" + e.description + "\t" + summary + "\n";
      }
      if (!emit(g.as_json ? arr.dump(2) + "\n" : text)) {
        err << "error: cannot write " << g.out << "\n";
        return kExitMismatch;
      }
      return kExitOk;
    }

    Context ctx;
    try {
      ctx.op = parse_operator(op_text);
    } catch (const GrammarError& e) {
      err << caret_message(op_text, e);
      return kExitUsage;
    }
    if (ctx.op.entry) cfg = ctx.op.entry->config;
    if (ctx.op.p) cfg.p = *ctx.op.p;
    if (p_flag >= 1.0) cfg.p = p_flag;
    if (!g.seed.empty()) cfg.seed = parse_seed(g.seed);
    if (!g.n_max.empty()) cfg.n_max = parse_count(g.n_max);
    if (g.tol > 0.0) cfg.tolerance = g.tol;
    cfg.validate();
    ctx.cfg = cfg;
    const IndexUniverse& u = ctx.op.spec.universe();
    const auto vec = [&](const std::string& t) -> SparseVec {
      try {
        return parse_vector(t, u, cfg.seed, cfg.p);
      } catch (const GrammarError& e) {
        throw UsageError(caret_message(t, e));
      }
    };
    if (!x_text.empty()) ctx.x = vec(x_text);
    if (!y_text.empty()) ctx.y = vec(y_text);

    if (orbit->parsed()) {
      const Index N = N_text.empty() ? 64 : parse_count(N_text);
      const SparseVec x = ctx.x ? *ctx.x : basis_vector(u, u.first_index());
      std::optional<SparseVec> y;
      if (!pair_text.empty()) y = vec(pair_text);
      std::string csv = y ? "n,norm,re,im\n" : "n,norm\n";
      SparseVec v = x;
      for (Index n = 0; n <= N; ++n) {
        if (n) v = apply(ctx.op.spec, v);
        csv += std::to_string(n) + "," + format_double(p_norm(v, cfg.p));
        if (y) {
          const Complex z = inner(v, *y);
          csv += "," + format_double(z.real()) + "," + format_double(z.imag());
        }
        csv += "\n";
      }
      if (!emit(csv)) {
        err << "error: cannot write " << g.out << "\n";
        return kExitMismatch;
      }
      return kExitOk;
    }

    json doc = {{"schema_version", kSchemaVersion},
                {"operator", {{"text", op_text}, {"description", ctx.op.spec.describe()}}},
                {"config", config_json(cfg)},
                {"replay", {{"args", replay_args}}}};
    json probes = json::array();
    json timing = json::object();
    int code = kExitOk;
    const auto timed = [&](const std::string& name, const std::function<json()>& f) {
      const auto t0 = std::chrono::steady_clock::now();
      json j = f();
      if (g.timing) timing[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      probes.push_back(std::move(j));
    };

    if (classify->parsed()) {
      doc["command"] = "classify";
      std::vector<std::string> names;
      if (!probes_text.empty()) {
        names = split_list(probes_text);
      } else if (ctx.op.entry) {
        for (const auto& r : ctx.op.entry->expected)
          if (std::count(kClassifyProbes.begin(), kClassifyProbes.end(), r.probe)) names.push_back(r.probe);
      }
      if (names.empty()) names = {"cb", "pb"};
      for (const auto& n : names)
        if (!std::count(kClassifyProbes.begin(), kClassifyProbes.end(), n)) {
          err << "error: unknown probe '" << n << "' (expected one of acb,cb,kreiss,me,order,pb,sk,uk,we)\n";
          return kExitUsage;
        }
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      std::map<std::string, std::string> verdicts;
      for (const auto& n : names) {
        timed(n, [&] {
          try {
            ProbeResult r = run_classify_probe(n, ctx);
            verdicts[n] = r.verdict;
            return r.doc;
          } catch (const UnsupportedError& e) {
            code = kExitMismatch;
            return json{{"probe", n}, {"error", e.what()}};
          } catch (const DomainError& e) {
            code = kExitMismatch;
            return json{{"probe", n}, {"error", e.what()}};
          }
        });
      }
      json exp = json::array();
      if (ctx.op.entry)
        for (const auto& r : ctx.op.entry->expected) {
          auto it = verdicts.find(r.probe);
          if (it == verdicts.end()) continue;
          const bool match = it->second == r.expected;
          if (!match) code = kExitMismatch;
          exp.push_back({{"probe", r.probe}, {"expected", r.expected}, {"actual", it->second}, {"match", match},
                         {"claim", r.anchor}});
        }
      doc["expectations"] = exp;
    } else if (iso->parsed()) {
      doc["command"] = "isometry";
      timed("isometry", [&] {
        const IsometryReport rep = strict_order_report(ctx.op.spec, m_max, cfg);
        json defects = json::array();
        for (int m = 1; m <= m_max; ++m) {
          const IsometryReport r = is_m_isometry(ctx.op.spec, m, cfg);
          defects.push_back({{"m", m},
                             {"max_defect", r.max_defect},
                             {"max_relative_defect", r.max_relative_defect},
                             {"holds", r.holds},
                             {"witness", r.witness}});
          if (r.holds) break;
        }
        json degrees = json::object();
        for (const auto& [label, d] : rep.degree_profile) degrees[label] = d ? json(*d) : json(nullptr);
        json cov = json::object();
        ProbeConfig basis_only = cfg;
        basis_only.random_count = 0;
        basis_only.adversarial = false;
        for (const auto& pv : probe_vectors(u, basis_only)) {
          try {
            cov[pv.label] = covariance_form(ctx.op.spec, pv.vec);
          } catch (const std::exception&) {
            cov[pv.label] = nullptr;
          }
        }
        json j = {{"probe", "isometry"},
                  {"m_max", m_max},
                  {"m_tested", rep.m_tested},
                  {"defects", defects},
                  {"degree_profile", degrees},
                  {"covariance", cov}};
        j["strict_order"] = rep.strict_order ? json(*rep.strict_order) : json(nullptr);
        if (rep.strict_order && *rep.strict_order > 1) {
          j["witness"] = rep.witness;
          j["witness_defect"] = rep.witness_defect;
        }
        return j;
      });
    } else if (probe->parsed()) {
      doc["command"] = "probe";
      if (mode == "mixing") {
        if (!ctx.op.backward_rule) throw UsageError("mixing needs a backward weighted shift operator\n");
        const Index N = N_text.empty() ? (Index{1} << 40) : parse_count(N_text);
        timed("mixing", [&] {
          const auto r = mixing_criterion_backward_shift(*ctx.op.backward_rule, N);
          return json{{"probe", "mixing"},
                      {"mixing_evidence", r.mixing_evidence},
                      {"verdict", r.mixing_evidence ? "mixing_evidence" : "fails"},
                      {"horizon", N},
                      {"inverse_products", index_curve_json(r.inverse_products)}};
        });
      } else if (mode == "chaos") {
        if (!ctx.op.poly) throw UsageError("chaos needs a polyshift operator\n");
        timed("chaos", [&] {
          const auto r = chaos_criterion_shift_adjoint(*ctx.op.poly, ctx.op.side);
          json j = {{"probe", "chaos"},
                    {"verdict", to_string(r.verdict)},
                    {"degree", r.degree},
                    {"strict_order", r.strict_order},
                    {"side", ctx.op.side == ShiftSide::Bilateral ? "bilateral" : "unilateral"}};
          if (r.summability)
            j["summability"] = {{"horizon", r.summability->horizon},
                                {"partial_sum", r.summability->partial_sum},
                                {"tail_bound", r.summability->converges ? json(r.summability->tail_bound) : json(nullptr)},
                                {"converges", r.summability->converges}};
          return j;
        });
      } else if (mode == "hc") {
        const Index N = N_text.empty() ? kCoverageHorizon : parse_count(N_text);
        const double R = std::stod(R_text), cell = std::stod(cell_text);
        SparseVec x = ctx.x ? *ctx.x : ctx.op.entry ? ctx.op.entry->hc_vector : basis_vector(u, u.first_index());
        SparseVec y = ctx.y ? *ctx.y : x;
        timed("hc", [&] { return coverage_json(hypercyclicity_probe(ctx.op.spec, x, y, N, R, cell), g.verbose); });
      } else {
        const Index N = N_text.empty() ? kErgodicHorizon : parse_count(N_text);
        const SparseVec x = default_x(ctx);
        if (weak) {
          const SparseVec y = default_y(ctx);
          timed("we", [&] { return ergodic_json("we", weak_ergodic_probe(ctx.op.spec, x, y, N)); });
        } else {
          timed("me", [&] { return ergodic_json("me", mean_ergodic_probe(ctx.op.spec, x, N, cfg.p)); });
        }
      }
    }
    sort_probes(probes);
    doc["probes"] = probes;
    if (g.timing) doc["timing"] = timing;
    if (!emit(render(doc, g.as_json))) {
      err << "error: cannot write " << g.out << "\n";
      return kExitMismatch;
    }
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what();
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConstructionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitMismatch;
  }
}

}  // namespace opdyn::cli
