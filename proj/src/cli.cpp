#include "su2kam/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>

#include "su2kam/config.hpp"
#include "su2kam/errors.hpp"
#include "su2kam/experiments.hpp"
#include "su2kam/trace_io.hpp"

namespace kam {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> precision;
  std::string trace;
};

struct Context {
  ExperimentConfig cfg;
  fs::path out_dir;
  std::optional<std::uint64_t> seed;
  std::ostream& out;
};

template <class Real>
std::vector<double> as_double(const std::vector<Real>& v) {
  return {v.begin(), v.end()};
}

template <class Real>
void write_trace_files(const fs::path& dir, const std::string& stem, const SchemeTrace<Real>& trace) {
  write_trace_jsonl(dir / (stem + ".jsonl"), trace);
  write_trace_csv(dir / (stem + ".csv"), trace);
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

/// Alpha and angle of a planted file override the config, so `plant` output can be run directly.
template <class Real>
void apply_planted_file(const Context& ctx, std::vector<Real>& alpha, Real& angle) {
  if (ctx.cfg.perturbation.kind != MapSpec::Kind::File) return;
  const fs::path p = fs::path(ctx.cfg.perturbation.file).is_absolute()
                         ? fs::path(ctx.cfg.perturbation.file)
                         : fs::path(ctx.cfg.base_dir) / ctx.cfg.perturbation.file;
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open planted cocycle file '" + p.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    alpha.clear();
    for (const auto& a : doc.at("alpha")) alpha.push_back(Real(a.get<double>()));
    angle = Real(doc.at("angle").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("planted cocycle file: " + std::string(e.what()));
  }
}

template <class Real>
int cmd_run(Context& ctx) {
  std::vector<Real> alpha = ctx.cfg.alpha<Real>();
  Real angle = Real(ctx.cfg.angle);
  apply_planted_file(ctx, alpha, angle);
  const int dim = static_cast<int>(alpha.size());
  AlgebraMap<Real> F = build_map<Real>(ctx.cfg.perturbation, dim, ctx.seed, ctx.cfg.base_dir);
  const PerturbedCocycle<Real> c(alpha, angle, std::move(F));
  const SchemeTrace<Real> trace = run_scheme(c, ctx.cfg.scheme);
  const bool pass = trace.status == SchemeStatus::Converged;

  write_trace_files(ctx.out_dir, "trace", trace);
  ordered_json summary;
  summary["command"] = "run";
  summary["verdict"] = verdict(pass);
  summary["alpha"] = as_double(alpha);
  summary["angle"] = static_cast<double>(angle);
  summary["trace"] = trace_summary(trace);
  write_json(ctx.out_dir / "summary.json", summary);
  ctx.out << "run: " << to_string(trace.status) << ", " << trace.steps.size() << " steps, "
          << trace.resonant_steps.size() << " resonant, final eps0 "
          << format_number(summary["trace"]["eps0_final"].get<double>()) << " -> " << verdict(pass) << '\n';
  return pass ? kExitPass : kExitFail;
}

template <class Real>
int cmd_rigidity(Context& ctx) {
  const std::vector<Real> alpha = ctx.cfg.alpha<Real>();
  const int dim = static_cast<int>(alpha.size());
  const AlgebraMap<Real> Y = build_map<Real>(ctx.cfg.plant, dim, ctx.seed, ctx.cfg.base_dir);
  const DiophParams<Real> dc{Real(ctx.cfg.dc_alpha.gamma_inv), Real(ctx.cfg.dc_alpha.tau), ctx.cfg.dc_alpha.K_max};
  std::optional<Real> target;
  if (ctx.cfg.plant.scale_to) target = Real(*ctx.cfg.plant.scale_to);
  const auto res = rigidity_experiment<Real>(alpha, Real(ctx.cfg.angle), dc, Y, target, ctx.cfg.planted_resonances,
                                             ctx.cfg.scheme);

  write_trace_files(ctx.out_dir, "trace", res.trace);
  ordered_json summary;
  summary["command"] = "experiment rigidity";
  summary["verdict"] = verdict(res.pass);
  summary["alpha"] = as_double(alpha);
  summary["a_d"] = ctx.cfg.angle;
  summary["dc_alpha"] = {{"margin", static_cast<double>(res.dc.margin)},
                         {"worst_k", res.dc.worst_k.to_string()},
                         {"horizon", res.dc.horizon}};
  summary["plant_scale"] = static_cast<double>(res.plant.scale);
  summary["plant_eps0"] = static_cast<double>(res.plant.eps0);
  summary["planted_resonances"] = res.planted_resonances;
  summary["decay"] = res.decay;
  summary["N_prime"] = as_double(res.N_prime);
  summary["scales_grow"] = res.scales_grow;
  summary["note"] = "the conjugacy is a smooth plant; measurable conjugacies are out of numerical reach";
  summary["trace"] = trace_summary(res.trace);
  write_json(ctx.out_dir / "summary.json", summary);
  ctx.out << "rigidity: " << res.trace.resonant_steps.size() << " resonant steps (planted " << res.planted_resonances
          << "), decay " << (res.decay ? "holds" : "fails") << ", status " << to_string(res.trace.status) << " -> "
          << verdict(res.pass) << '\n';
  return res.pass ? kExitPass : kExitFail;
}

template <class Real>
ordered_json plan_json(const CascadePlan<Real>& plan) {
  ordered_json j;
  j["angle"] = static_cast<double>(plan.angle);
  j["steps"] = plan.steps;
  ordered_json ks = ordered_json::array();
  for (const auto& k : plan.k) ks.push_back(freq_json(k));
  j["k"] = ks;
  j["margin"] = static_cast<double>(plan.margin);
  j["samples"] = plan.samples;
  return j;
}

template <class Real>
int cmd_liouville(Context& ctx) {
  const std::vector<Real> alpha = ctx.cfg.alpha<Real>();
  const int dim = static_cast<int>(alpha.size());
  const AlgebraMap<Real> F = build_map<Real>(ctx.cfg.perturbation, dim, ctx.seed, ctx.cfg.base_dir);
  const auto res = liouville_experiment<Real>(alpha, ctx.cfg.cascade_steps, F, ctx.cfg.scheme, ctx.cfg.cascade);

  write_trace_files(ctx.out_dir, "trace", res.trace);
  write_trace_files(ctx.out_dir, "control", res.control);
  ordered_json summary;
  summary["command"] = "experiment liouville";
  summary["verdict"] = verdict(res.pass);
  summary["alpha"] = as_double(alpha);
  summary["plan"] = plan_json(res.plan);
  summary["control_plan"] = plan_json(res.control_plan);
  summary["missed"] = res.missed;
  summary["unexpected"] = res.unexpected;
  ordered_json windows = ordered_json::array();
  for (std::size_t i = 0; i < res.windows.size(); ++i)
    windows.push_back({{"lower", res.windows[i].lower}, {"upper", res.windows[i].upper}, {"contains_k", res.in_window[i]}});
  summary["windows"] = windows;
  summary["trace"] = trace_summary(res.trace);
  summary["control"] = trace_summary(res.control);
  write_json(ctx.out_dir / "summary.json", summary);
  ctx.out << "liouville: planted steps";
  for (int s : res.plan.steps) ctx.out << ' ' << s;
  ctx.out << ", detected";
  for (int s : res.trace.resonant_steps) ctx.out << ' ' << s;
  ctx.out << ", control " << res.control.resonant_steps.size() << " resonant -> " << verdict(res.pass) << '\n';
  return res.pass ? kExitPass : kExitFail;
}

template <class Real>
int cmd_toy(Context& ctx) {
  if (!ctx.seed) throw ConfigError("the toy experiment draws random constants and needs a seed");
  const std::vector<Real> alpha = ctx.cfg.alpha<Real>();
  const ToyOutcome res = toy_experiment<Real>(alpha, ctx.cfg.toy_k_max, Real(ctx.cfg.toy_tol), ctx.cfg.toy_cases, *ctx.seed);

  auto cases_json = [](const std::vector<ToyCase>& cases) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : cases) {
      ordered_json j;
      j["c1"] = c.c1;
      j["c2"] = c.c2;
      j["planted"] = freq_json(c.planted);
      j["pairing"] = c.plus ? "plus" : "minus";
      ordered_json minus = ordered_json::array(), plus = ordered_json::array();
      for (const auto& k : c.found.minus) minus.push_back(freq_json(k));
      for (const auto& k : c.found.plus) plus.push_back(freq_json(k));
      j["found_minus"] = minus;
      j["found_plus"] = plus;
      j["ok"] = c.ok;
      arr.push_back(std::move(j));
    }
    return arr;
  };
  ordered_json summary;
  summary["command"] = "experiment toy";
  summary["verdict"] = verdict(res.pass);
  summary["alpha"] = as_double(alpha);
  summary["k_max"] = ctx.cfg.toy_k_max;
  summary["tol"] = ctx.cfg.toy_tol;
  summary["planted_ok"] = res.planted_ok;
  summary["generic_ok"] = res.generic_ok;
  summary["planted"] = cases_json(res.planted);
  summary["generic"] = cases_json(res.generic);
  write_json(ctx.out_dir / "summary.json", summary);
  ctx.out << "toy: planted " << res.planted_ok << '/' << res.planted.size() << ", generic " << res.generic_ok << '/'
          << res.generic.size() << " -> " << verdict(res.pass) << '\n';
  return res.pass ? kExitPass : kExitFail;
}

template <class Real>
ordered_json channel_json(const ScalarSeries<Real>& s) {
  ordered_json arr = ordered_json::array();
  const FreqBox box = s.box();
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto c = s.coeffs()[i];
    if (c == Complex<Real>(0, 0)) continue;
    arr.push_back({freq_json(box.freq(i)), static_cast<double>(c.real()), static_cast<double>(c.imag())});
  }
  return arr;
}

template <class Real>
int cmd_plant(Context& ctx) {
  const std::vector<Real> alpha = ctx.cfg.alpha<Real>();
  const int dim = static_cast<int>(alpha.size());
  const AlgebraMap<Real> Y = build_map<Real>(ctx.cfg.plant, dim, ctx.seed, ctx.cfg.base_dir);
  std::optional<Real> target;
  if (ctx.cfg.plant.scale_to) target = Real(*ctx.cfg.plant.scale_to);
  const Plant<Real> plant =
      make_plant<Real>(alpha, Real(ctx.cfg.angle), Y, target, ctx.cfg.scheme.band, ctx.cfg.scheme.oversampling);
  const auto& c = plant.form.cocycle;
  ordered_json doc;
  doc["alpha"] = as_double(alpha);
  doc["angle"] = static_cast<double>(c.angle());
  doc["a_d"] = ctx.cfg.angle;
  doc["scale"] = static_cast<double>(plant.scale);
  doc["eps0"] = static_cast<double>(plant.eps0);
  doc["tail"] = static_cast<double>(plant.form.tail);
  doc["P"] = {static_cast<double>(plant.form.P.z.real()), static_cast<double>(plant.form.P.z.imag()),
              static_cast<double>(plant.form.P.w.real()), static_cast<double>(plant.form.P.w.imag())};
  doc["F"] = {{"band", c.F().band()}, {"t", channel_json(c.F().t)}, {"z", channel_json(c.F().z)}};
  write_json(ctx.out_dir / "planted.json", doc);
  ctx.out << "plant: eps0 " << format_number(static_cast<double>(plant.eps0)) << ", angle "
          << format_number(static_cast<double>(c.angle())) << " -> " << (ctx.out_dir / "planted.json").string() << '\n';
  return kExitPass;
}

int cmd_report(const Options& opt, std::ostream& out) {
  fs::path path = opt.trace;
  if (path.empty()) path = fs::path(opt.out.empty() ? "out" : opt.out) / "trace.jsonl";
  const auto lines = read_trace_jsonl(path);
  out << "step      N            K   k_r                  eps0               normGs0                 angle\n";
  std::vector<int> resonant;
  for (const auto& l : lines) {
    const std::string k = l.at("k_r").is_null() ? "-" : l.at("k_r").dump();
    char buf[200];
    std::snprintf(buf, sizeof buf, "%4d %6d %12.6g %5s %21.14g %21.14g %21.17g\n", l.at("step").get<int>(),
                  l.at("N").get<int>(), l.at("K").get<double>(), k.c_str(), l.at("eps0").get<double>(),
                  l.at("normGs0").get<double>(), l.at("angle").get<double>());
    out << buf;
    if (!l.at("k_r").is_null()) resonant.push_back(l.at("step").get<int>());
  }
  out << lines.size() << " steps, resonant steps:";
  for (int s : resonant) out << ' ' << s;
  if (resonant.empty()) out << " none";
  out << '\n';
  if (!lines.empty()) out << "final eps0 " << format_number(lines.back().at("eps0").get<double>()) << '\n';
  const fs::path summary = path.parent_path() / "summary.json";
  if (fs::exists(summary)) {
    std::ifstream in(summary);
    const auto doc = nlohmann::json::parse(in, nullptr, false);
    if (!doc.is_discarded() && doc.contains("verdict")) out << "verdict " << doc["verdict"].get<std::string>() << '\n';
  }
  return kExitPass;
}

enum class Command { Run, Rigidity, Liouville, Toy, Plant };

template <class Real>
int dispatch(Command cmd, Context& ctx) {
  switch (cmd) {
    case Command::Run: return cmd_run<Real>(ctx);
    case Command::Rigidity: return cmd_rigidity<Real>(ctx);
    case Command::Liouville: return cmd_liouville<Real>(ctx);
    case Command::Toy: return cmd_toy<Real>(ctx);
    case Command::Plant: return cmd_plant<Real>(ctx);
  }
  return kExitConfig;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"KAM scheme for quasiperiodic cocycles on T^d x SU(2)", "su2kam_cli"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--config", opt.config, "experiment config (TOML subset)")->required();
    sc->add_option("--out", opt.out, "output directory (default: output.dir of the config)");
    sc->add_option("--seed", opt.seed, "seed for random specs, overrides the config");
    sc->add_option("--precision", opt.precision, "working precision in bits: <= 53 double, <= 64 long double");
  };
  CLI::App* run = app.add_subcommand("run", "run the scheme on a configured cocycle");
  add_common(run);
  CLI::App* experiment = app.add_subcommand("experiment", "desk-scale experiments");
  experiment->require_subcommand(1);
  CLI::App* rigidity = experiment->add_subcommand("rigidity", "reducible plant with a DC_alpha constant");
  CLI::App* liouville = experiment->add_subcommand("liouville", "planted resonance cascade and control run");
  CLI::App* toy = experiment->add_subcommand("toy", "frequency support of conjugacies between constants");
  for (CLI::App* sc : {rigidity, liouville, toy}) add_common(sc);
  CLI::App* plant = app.add_subcommand("plant", "write a planted cocycle file");
  add_common(plant);
  CLI::App* report = app.add_subcommand("report", "summarize a trace");
  report->add_option("--trace", opt.trace, "trace file (default: <out>/trace.jsonl)");
  report->add_option("--out", opt.out, "directory holding trace.jsonl");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (report->parsed()) return cmd_report(opt, out);
    Command cmd = Command::Run;
    if (rigidity->parsed()) cmd = Command::Rigidity;
    else if (liouville->parsed()) cmd = Command::Liouville;
    else if (toy->parsed()) cmd = Command::Toy;
    else if (plant->parsed()) cmd = Command::Plant;

    Context ctx{load_experiment_config(opt.config), {}, {}, out};
    ctx.out_dir = opt.out.empty() ? fs::path(ctx.cfg.out_dir) : fs::path(opt.out);
    ctx.seed = opt.seed ? opt.seed : ctx.cfg.seed;
    const int bits = opt.precision.value_or(ctx.cfg.scheme.precision);
    ctx.cfg.scheme.precision = bits;
    if (bits < 1 || bits > 64) throw ConfigError("precision of " + std::to_string(bits) + " bits is not available (max 64)");
    return bits <= 53 ? dispatch<double>(cmd, ctx) : dispatch<long double>(cmd, ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    err << "rejected: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitConfig;
}

}  // namespace kam
