#pragma once

// The `entangle` command-line front end. run_cli() takes the argument list
// and output streams so it can be driven in-process.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "entangle/entangle.hpp"
#include "entangle/io.hpp"

namespace entangle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Default seed: $ENTANGLE_SEED if set, else 42.
inline std::uint64_t default_seed() {
  if (const char *env = std::getenv("ENTANGLE_SEED"); env && *env) {
    try {
      return io::parse_uint(env);
    } catch (const FormatError &) {
      throw FormatError("ENTANGLE_SEED is not an unsigned integer");
    }
  }
  return 42;
}

/// Fit form used for a series when none is given: mean-squared series are
/// quadratic, fixed-partner and equilateral series follow sqrt(n).
inline FitModel infer_fit_model(std::string_view series) {
  if (series.find("msq") != std::string_view::npos || series.find("mean_squared") != std::string_view::npos) {
    return FitModel::a_plus_b_n2;
  }
  for (std::string_view tag : {"square", "trefoil", "equilateral"}) {
    if (series.find(tag) != std::string_view::npos) {
      return FitModel::a_plus_b_sqrt_n;
    }
  }
  return FitModel::a_plus_b_n;
}

inline void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw Error("cannot write " + path.string());
  }
  os << text;
}

inline std::string read_text(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw Error("cannot read " + path);
  }
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::size_t ndirs = 100000;
  std::size_t pairs = 1000;
  std::uint64_t seed = 42;
  double quad_tol = 1e-9;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline Chain hopf_square_a() { return Chain({{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}}, true); }
inline Chain hopf_square_b() { return Chain({{0, 0, -1}, {2, 0, -1}, {2, 0, 1}, {0, 0, 1}}, true); }

inline std::vector<CheckResult> run_verify(const VerifyOptions &opt) {
  std::vector<CheckResult> out;
  auto fmt = [](double x) { return io::format_double(x); };

  {
    KeyedRng rng(opt.seed, {detail::fnv1a("verify.kernel"), 0, 0});
    double worst = 0.0;
    std::size_t done = 0;
    while (done < opt.pairs) {
      const Segment a{rng.unit_cube_point(), rng.unit_cube_point()};
      const Segment b{rng.unit_cube_point(), rng.unit_cube_point()};
      if (segment_distance(a, b) < 1e-3) {
        continue;
      }
      const double exact = seg_pair_linking(a, b);
      const double quad = oracle::seg_pair_quadrature(a, b, opt.quad_tol);
      worst = std::max(worst, std::abs(exact - quad));
      ++done;
    }
    out.push_back({"kernel_vs_quadrature", worst <= 1e-8,
                   std::to_string(done) + " pairs, max |diff| = " + fmt(worst)});
  }

  auto projection_check = [&](std::string name, double exact, const oracle::Estimate &est) {
    const double diff = std::abs(exact - est.mean);
    out.push_back({std::move(name), diff <= 3.0 * est.std_error + 1e-12,
                   "exact " + fmt(exact) + ", projection " + fmt(est.mean) + " +- " + fmt(est.std_error)});
  };

  {
    KeyedRng rng(opt.seed, {detail::fnv1a("verify.square"), 0, 0});
    const Chain sq = fixed_square();
    projection_check("square_writhe_projection", writhe(sq), oracle::writhe_by_projection(sq, opt.ndirs, rng));
  }
  {
    KeyedRng rng(opt.seed, {detail::fnv1a("verify.trefoil"), 0, 0});
    const Chain tr = fixed_trefoil();
    projection_check("trefoil_writhe_projection", writhe(tr), oracle::writhe_by_projection(tr, opt.ndirs, rng));
  }
  {
    KeyedRng rng(opt.seed, {detail::fnv1a("verify.hopf"), 0, 0});
    const Chain a = hopf_square_a(), b = hopf_square_b();
    projection_check("hopf_linking_projection", linking_number(a, b),
                     oracle::linking_by_projection(a, b, opt.ndirs, rng));
  }
  {
    KeyedRng gen(opt.seed, {detail::fnv1a("verify.walks"), 0, 0});
    const Chain a = gen_uniform_walk(8, gen), b = gen_uniform_walk(8, gen);
    KeyedRng rng(opt.seed, {detail::fnv1a("verify.walks"), 1, 0});
    projection_check("walk_pair_linking_projection", linking_number(a, b),
                     oracle::linking_by_projection(a, b, opt.ndirs, rng));
  }
  return out;
}

// ---------------------------------------------------------------------------
// reproduce

/// Writes the full results tree for `r` under `dir`:
///   stats.csv fits.csv conjectures.csv results.json plot.gp
///   series/<name>.csv specs/<name>.spec
inline void write_results_tree(const ReproduceResult &r, const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "series");
  fs::create_directories(dir / "specs");

  std::vector<StatTable> tables;
  std::ostringstream fits;
  fits << io::kFitHeader << '\n';
  for (const auto &s : r.series) {
    tables.push_back(s.table);
    io::write_fit_csv_row(fits, s.table.series, s.fit);

    std::ostringstream one;
    io::write_stat_csv(one, {s.table});
    write_text(dir / "series" / (s.table.series + ".csv"), one.str());
    std::ostringstream spec;
    io::write_spec(spec, s.spec);
    write_text(dir / "specs" / (s.table.series + ".spec"), spec.str());
  }
  std::ostringstream stats;
  io::write_stat_csv(stats, tables);
  write_text(dir / "stats.csv", stats.str());
  write_text(dir / "fits.csv", fits.str());

  std::ostringstream conj;
  conj << "name,ratio_mean,ratio_stderr,q,b_abs,b_over_sqrt_q,b_approx_sqrt_q\n";
  for (const auto &c : r.conjectures) {
    conj << c.name << ',' << io::format_double(c.report.ratio_mean) << ','
         << io::format_double(c.report.ratio_stderr) << ',' << io::format_double(c.report.q) << ','
         << io::format_double(c.report.b_abs) << ',' << io::format_double(c.report.b_over_sqrt_q) << ','
         << (c.report.b_approx_sqrt_q ? "true" : "false") << '\n';
  }
  write_text(dir / "conjectures.csv", conj.str());
  write_text(dir / "results.json", io::reproduce_document(r).dump(2) + "\n");

  std::ostringstream gp;
  io::write_gnuplot_script(gp, r.series);
  write_text(dir / "plot.gp", gp.str());
}

// ---------------------------------------------------------------------------

inline int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Entanglement measures of polygonal chains and their random-ensemble scaling laws", "entangle"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  // gen
  auto *gen = app.add_subcommand("gen", "generate chains and write chain files");
  std::string gen_model = "uniform_walk", gen_dir = ".", gen_prefix = "chain";
  std::size_t gen_n = 10, gen_count = 1;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--model", gen_model, "uniform_walk|uniform_polygon|equilateral_walk|fixed_square|fixed_trefoil")
      ->capture_default_str();
  gen->add_option("-n,--n", gen_n, "edges")->capture_default_str();
  gen->add_option("--count", gen_count, "number of chains")->capture_default_str();
  gen->add_option("--seed", gen_seed, "seed (default $ENTANGLE_SEED or 42)");
  gen->add_option("--out", gen_dir, "output directory")->capture_default_str();
  gen->add_option("--prefix", gen_prefix, "file name prefix")->capture_default_str();

  // measure
  auto *measure = app.add_subcommand("measure", "measures of chain files as JSON");
  std::vector<std::string> measure_files;
  bool measure_shared_zero = false;
  measure->add_option("files", measure_files, "one chain file, or two for their linking number")
      ->required()
      ->expected(1, 2);
  measure->add_flag("--shared-endpoints-zero", measure_shared_zero,
                    "edge pairs meeting at an endpoint contribute 0 to linking");

  // experiment
  auto *experiment = app.add_subcommand("experiment", "run one ensemble experiment");
  std::string exp_spec_file, exp_out, exp_fit, exp_protocol;
  std::map<std::string, std::string> exp_flags;
  experiment->add_option("--spec", exp_spec_file, "key=value spec file or a results JSON document");
  experiment->add_option("--protocol", exp_protocol, "desk|paper: preset samples, subcollections and lengths");
  for (const char *key : {"name", "model", "second_model", "partner", "statistic", "measure", "lengths", "samples",
                          "subcollections", "seed"}) {
    std::string flag = std::string("--") + key;
    for (auto &ch : flag) {
      if (ch == '_') ch = '-';
    }
    experiment->add_option_function<std::string>(
        flag, [&exp_flags, key](const std::string &v) { exp_flags[key] = v; }, std::string("spec field ") + key);
  }
  experiment->add_option("--fit", exp_fit, "fit model, or 'auto' to infer from the series name");
  experiment->add_option("--out", exp_out, "output prefix: writes <prefix>.csv and <prefix>.json");

  // fit
  auto *fitcmd = app.add_subcommand("fit", "fit scaling laws to a StatTable CSV");
  std::string fit_csv, fit_model_name, fit_out;
  bool fit_weighted = false;
  fitcmd->add_option("csv", fit_csv, "StatTable CSV")->required();
  fitcmd->add_option("--model", fit_model_name, "a_plus_b_n|a_plus_b_n2|a_plus_b_sqrt_n (default: by series name)");
  fitcmd->add_flag("--weighted", fit_weighted, "weight points by 1/stderr^2");
  fitcmd->add_option("--out", fit_out, "write fit CSV here instead of stdout");

  // reproduce
  auto *repro = app.add_subcommand("reproduce", "run every scaling-law series and write a results tree");
  std::string repro_scale = "desk", repro_dir = "results";
  std::optional<std::uint64_t> repro_seed;
  repro->add_option("--scale", repro_scale, "desk|paper")->capture_default_str();
  repro->add_option("--seed", repro_seed, "seed (default $ENTANGLE_SEED or 42)");
  repro->add_option("--out", repro_dir, "output directory")->capture_default_str();

  // verify
  auto *verify = app.add_subcommand("verify", "check exact kernels against the slow oracles");
  VerifyOptions vopt;
  std::optional<std::uint64_t> verify_seed;
  verify->add_option("--ndirs", vopt.ndirs, "projection directions per check")->capture_default_str();
  verify->add_option("--pairs", vopt.pairs, "random segment pairs for the quadrature check")->capture_default_str();
  verify->add_option("--seed", verify_seed, "seed (default $ENTANGLE_SEED or 42)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  RunOptions run_opts;
  run_opts.threads = threads;

  try {
    if (*gen) {
      const auto model = parse_chain_model(gen_model);
      if (!model) {
        throw SpecInvalid("unknown model '" + gen_model + "'");
      }
      const std::uint64_t seed = gen_seed ? *gen_seed : default_seed();
      std::filesystem::create_directories(gen_dir);
      const std::uint64_t id = detail::mix64(detail::fnv1a("gen|" + gen_model) ^ detail::mix64(gen_n));
      for (std::size_t i = 0; i < gen_count; ++i) {
        KeyedRng rng(seed, {id, 0, i});
        const Chain c = make_chain({*model, gen_n}, rng);
        const auto path = std::filesystem::path(gen_dir) / (gen_prefix + "_" + std::to_string(i) + ".chain");
        io::save_chain(path.string(), c);
        out << path.string() << '\n';
      }
      return kExitOk;
    }

    if (*measure) {
      nlohmann::json doc;
      doc["chains"] = nlohmann::json::array();
      std::vector<Chain> chains;
      for (const auto &f : measure_files) {
        chains.push_back(io::load_chain(f));
        const Chain &c = chains.back();
        const ChainMeasures m = all_measures(c);
        doc["chains"].push_back({{"file", f},
                                 {"closed", c.closed()},
                                 {"n", c.edge_count()},
                                 {"writhe", m.writhe},
                                 {"torsion", m.torsion},
                                 {"self_linking", m.self_linking},
                                 {"acn", m.acn}});
      }
      doc["linking"] = nullptr;
      if (chains.size() == 2) {
        doc["linking"] = linking_number(chains[0], chains[1],
                                        measure_shared_zero ? SharedEndpoints::contribute_zero
                                                            : SharedEndpoints::reject);
      }
      doc["version"] = version_string();
      out << doc.dump(2) << '\n';
      return kExitOk;
    }

    if (*experiment) {
      EnsembleSpec spec;
      spec.seed = default_seed();
      if (!exp_protocol.empty()) {
        const auto scale = parse_scale(exp_protocol);
        if (!scale) {
          throw SpecInvalid("protocol must be desk or paper");
        }
        const ScaleParams p = scale_params(*scale);
        spec.samples_per_subcollection = p.samples;
        spec.subcollections = p.subcollections;
        spec.lengths = p.lengths;
      }
      if (!exp_spec_file.empty()) {
        const std::string text = read_text(exp_spec_file);
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
          nlohmann::json j;
          try {
            j = nlohmann::json::parse(text);
          } catch (const nlohmann::json::exception &e) {
            throw FormatError(std::string("bad JSON spec: ") + e.what());
          }
          spec = io::spec_from_json(j.contains("spec") ? j.at("spec") : j);
        } else {
          std::istringstream is(text);
          spec = io::read_spec(is, spec);
        }
      }
      for (const auto &[key, value] : exp_flags) {
        io::apply_setting(spec, key, value);
      }
      if (spec.name == EnsembleSpec{}.name) {
        spec.name = std::string(to_string(spec.model)) + "." + std::string(to_string(spec.statistic)) + "_" +
                    std::string(to_string(spec.measure));
      }
      spec.validate();
      const StatTable table = run_experiment(spec, run_opts);

      std::optional<FitResult> fitted;
      if (!exp_fit.empty()) {
        FitModel fm;
        if (exp_fit == "auto") {
          fm = infer_fit_model(spec.name);
        } else if (auto parsed = parse_fit_model(exp_fit)) {
          fm = *parsed;
        } else {
          throw SpecInvalid("unknown fit model '" + exp_fit + "'");
        }
        fitted = fit_table(table, fm);
      }

      std::ostringstream csv;
      io::write_stat_csv(csv, {table});
      const auto doc = io::experiment_document(spec, table, fitted ? &*fitted : nullptr);
      if (exp_out.empty()) {
        out << csv.str();
      } else {
        const std::filesystem::path prefix(exp_out);
        if (prefix.has_parent_path()) {
          std::filesystem::create_directories(prefix.parent_path());
        }
        write_text(exp_out + ".csv", csv.str());
        write_text(exp_out + ".json", doc.dump(2) + "\n");
        out << exp_out << ".csv\n" << exp_out << ".json\n";
      }
      return kExitOk;
    }

    if (*fitcmd) {
      std::optional<FitModel> forced;
      if (!fit_model_name.empty()) {
        forced = parse_fit_model(fit_model_name);
        if (!forced) {
          throw SpecInvalid("unknown fit model '" + fit_model_name + "'");
        }
      }
      std::ifstream is(fit_csv);
      if (!is) {
        throw Error("cannot read " + fit_csv);
      }
      std::ostringstream os;
      os << io::kFitHeader << '\n';
      for (const auto &t : io::read_stat_csv(is)) {
        const FitModel fm = forced ? *forced : infer_fit_model(t.series);
        std::vector<double> w;
        if (fit_weighted) {
          for (const auto &r : t.rows) {
            if (!(r.std_error > 0.0)) {
              throw NumericalError("weighted fit needs positive stderr in every row");
            }
            w.push_back(1.0 / (r.std_error * r.std_error));
          }
        }
        const auto xs = t.lengths(), ys = t.means();
        io::write_fit_csv_row(os, t.series, fit(xs, ys, fm, w));
      }
      if (fit_out.empty()) {
        out << os.str();
      } else {
        write_text(fit_out, os.str());
      }
      return kExitOk;
    }

    if (*repro) {
      const auto scale = parse_scale(repro_scale);
      if (!scale) {
        throw SpecInvalid("scale must be desk or paper");
      }
      const std::uint64_t seed = repro_seed ? *repro_seed : default_seed();
      const ReproduceResult r = reproduce_all(*scale, seed, run_opts);
      write_results_tree(r, repro_dir);
      for (const auto &s : r.series) {
        out << s.table.series << ' ' << to_string(s.fit.model) << " b=" << io::format_double(s.fit.b)
            << " r2=" << io::format_double(s.fit.r_squared) << '\n';
      }
      out << "wrote " << repro_dir << '\n';
      return kExitOk;
    }

    if (*verify) {
      vopt.seed = verify_seed ? *verify_seed : default_seed();
      bool all = true;
      for (const auto &c : run_verify(vopt)) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        all = all && c.pass;
      }
      return all ? kExitOk : kExitNumerical;
    }
  } catch (const NumericalError &e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace entangle::cli
