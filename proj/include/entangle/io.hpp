#pragma once

// Text formats: chain files, StatTable / FitResult CSV, key=value
// experiment specs, and the JSON results document.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "entangle/chain.hpp"
#include "entangle/ensemble.hpp"
#include "entangle/fitting.hpp"
#include "entangle/reproduce.hpp"
#include "entangle/version.hpp"

namespace entangle::io {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("not a number: '" + std::string(s) + "'");
  }
  return x;
}

inline std::uint64_t parse_uint(std::string_view s) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("not an unsigned integer: '" + std::string(s) + "'");
  }
  return x;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) {
      return out;
    }
    start = pos + 1;
  }
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// ---------------------------------------------------------------------------
// Chain files:
//   # chain closed=<true|false> n=<edges>
//   x y z        (one vertex per line)

inline void write_chain(std::ostream &os, const Chain &c) {
  os << "# chain closed=" << (c.closed() ? "true" : "false") << " n=" << c.edge_count() << '\n';
  for (const auto &p : c.vertices()) {
    os << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z) << '\n';
  }
}

inline Chain read_chain(std::istream &is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw FormatError("empty chain file");
  }
  std::istringstream header(line);
  std::string hash, word, closed_kv, n_kv;
  header >> hash >> word >> closed_kv >> n_kv;
  if (hash != "#" || word != "chain" || closed_kv.rfind("closed=", 0) != 0 || n_kv.rfind("n=", 0) != 0) {
    throw FormatError("bad chain header: '" + line + "'");
  }
  const std::string closed_val = closed_kv.substr(7);
  if (closed_val != "true" && closed_val != "false") {
    throw FormatError("closed must be true or false");
  }
  const bool closed = closed_val == "true";
  const std::uint64_t edges = parse_uint(n_kv.substr(2));

  std::vector<Point3> vertices;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') {
      continue;
    }
    std::istringstream row(t);
    std::string xs, ys, zs, extra;
    if (!(row >> xs >> ys >> zs) || (row >> extra)) {
      throw FormatError("chain vertex line needs exactly three numbers: '" + t + "'");
    }
    vertices.push_back({parse_double(xs), parse_double(ys), parse_double(zs)});
  }
  const std::size_t expected = closed ? edges : edges + 1;
  if (vertices.size() != expected) {
    throw FormatError("chain header says n=" + std::to_string(edges) + " but file has " +
                      std::to_string(vertices.size()) + " vertices");
  }
  return Chain(std::move(vertices), closed);
}

inline void save_chain(const std::string &path, const Chain &c) {
  std::ofstream os(path);
  if (!os) {
    throw Error("cannot write " + path);
  }
  write_chain(os, c);
}

inline Chain load_chain(const std::string &path) {
  std::ifstream is(path);
  if (!is) {
    throw Error("cannot read " + path);
  }
  return read_chain(is);
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kStatHeader = "series,n,mean,stderr,samples,degenerate_resamples";
inline constexpr std::string_view kFitHeader = "series,model,a,stderr_a,b,stderr_b,r2";

inline void write_stat_csv(std::ostream &os, const std::vector<StatTable> &tables) {
  os << kStatHeader << '\n';
  for (const auto &t : tables) {
    for (const auto &r : t.rows) {
      os << t.series << ',' << r.n << ',' << format_double(r.mean) << ',' << format_double(r.std_error) << ','
         << r.samples << ',' << r.degenerate_resamples << '\n';
    }
  }
}

/// Reads rows back into tables, in order of first appearance of each series.
inline std::vector<StatTable> read_stat_csv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kStatHeader) {
    throw FormatError("expected CSV header: " + std::string(kStatHeader));
  }
  std::vector<StatTable> tables;
  std::map<std::string, std::size_t> index;
  while (std::getline(is, line)) {
    if (trim(line).empty()) {
      continue;
    }
    const auto f = split(trim(line), ',');
    if (f.size() != 6) {
      throw FormatError("CSV row needs 6 fields: '" + line + "'");
    }
    auto [it, inserted] = index.try_emplace(f[0], tables.size());
    if (inserted) {
      tables.push_back({f[0], {}});
    }
    tables[it->second].rows.push_back({parse_uint(f[1]), parse_double(f[2]), parse_double(f[3]),
                                       parse_uint(f[4]), parse_uint(f[5])});
  }
  return tables;
}

inline void write_fit_csv_row(std::ostream &os, std::string_view series, const FitResult &f) {
  os << series << ',' << to_string(f.model) << ',' << format_double(f.a) << ',' << format_double(f.stderr_a)
     << ',' << format_double(f.b) << ',' << format_double(f.stderr_b) << ',' << format_double(f.r_squared)
     << '\n';
}

// ---------------------------------------------------------------------------
// key=value experiment specs
//
//   name=walk.msq_writhe
//   model=uniform_walk
//   second_model=uniform_walk      (optional)
//   partner=square|trefoil|none    (optional)
//   statistic=mean|mean_squared|mean_abs
//   measure=writhe|linking|self_linking|torsion|acn
//   lengths=10,20,30  or  lengths=10:60:10
//   samples=200
//   subcollections=10
//   seed=42

inline std::vector<std::size_t> parse_lengths(std::string_view s) {
  std::vector<std::size_t> out;
  if (s.find(':') != std::string_view::npos) {
    const auto f = split(s, ':');
    if (f.size() != 3) {
      throw FormatError("length range must be start:stop:step");
    }
    const auto start = parse_uint(trim(f[0])), stop = parse_uint(trim(f[1])), step = parse_uint(trim(f[2]));
    if (step == 0) {
      throw FormatError("length step must be positive");
    }
    for (auto n = start; n <= stop; n += step) {
      out.push_back(n);
    }
    return out;
  }
  for (const auto &tok : split(s, ',')) {
    out.push_back(parse_uint(trim(tok)));
  }
  return out;
}

inline std::string format_lengths(const std::vector<std::size_t> &lengths) {
  std::string s;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    s += (i ? "," : "") + std::to_string(lengths[i]);
  }
  return s;
}

/// Applies one key=value setting to a spec. Throws FormatError on unknown
/// keys or values.
inline void apply_setting(EnsembleSpec &spec, std::string_view key, std::string_view value) {
  auto bad = [&] { return FormatError("bad value for " + std::string(key) + ": '" + std::string(value) + "'"); };
  if (key == "name") {
    spec.name = std::string(value);
  } else if (key == "model") {
    auto m = parse_chain_model(value);
    if (!m) throw bad();
    spec.model = *m;
  } else if (key == "second_model") {
    if (value == "none" || value.empty()) {
      spec.second_model.reset();
    } else {
      auto m = parse_chain_model(value);
      if (!m) throw bad();
      spec.second_model = *m;
    }
  } else if (key == "partner") {
    auto p = parse_partner(value);
    if (!p) throw bad();
    spec.partner = *p;
  } else if (key == "statistic") {
    auto s = parse_statistic(value);
    if (!s) throw bad();
    spec.statistic = *s;
  } else if (key == "measure") {
    auto m = parse_measure_kind(value);
    if (!m) throw bad();
    spec.measure = *m;
  } else if (key == "lengths") {
    spec.lengths = parse_lengths(value);
  } else if (key == "samples") {
    spec.samples_per_subcollection = parse_uint(value);
  } else if (key == "subcollections") {
    spec.subcollections = parse_uint(value);
  } else if (key == "seed") {
    spec.seed = parse_uint(value);
  } else {
    throw FormatError("unknown spec key '" + std::string(key) + "'");
  }
}

inline EnsembleSpec read_spec(std::istream &is, EnsembleSpec spec = {}) {
  std::string line;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') {
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw FormatError("spec line is not key=value: '" + t + "'");
    }
    apply_setting(spec, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return spec;
}

inline void write_spec(std::ostream &os, const EnsembleSpec &spec) {
  os << "name=" << spec.name << '\n'
     << "model=" << to_string(spec.model) << '\n'
     << "second_model=" << (spec.second_model ? to_string(*spec.second_model) : "none") << '\n'
     << "partner=" << to_string(spec.partner) << '\n'
     << "statistic=" << to_string(spec.statistic) << '\n'
     << "measure=" << to_string(spec.measure) << '\n'
     << "lengths=" << format_lengths(spec.lengths) << '\n'
     << "samples=" << spec.samples_per_subcollection << '\n'
     << "subcollections=" << spec.subcollections << '\n'
     << "seed=" << spec.seed << '\n';
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

inline json to_json(const EnsembleSpec &spec) {
  return json{{"name", spec.name},
              {"model", to_string(spec.model)},
              {"second_model", spec.second_model ? json(to_string(*spec.second_model)) : json(nullptr)},
              {"partner", to_string(spec.partner)},
              {"statistic", to_string(spec.statistic)},
              {"measure", to_string(spec.measure)},
              {"lengths", spec.lengths},
              {"samples", spec.samples_per_subcollection},
              {"subcollections", spec.subcollections},
              {"seed", spec.seed}};
}

inline EnsembleSpec spec_from_json(const json &j) {
  EnsembleSpec spec;
  try {
    apply_setting(spec, "name", j.at("name").get<std::string>());
    apply_setting(spec, "model", j.at("model").get<std::string>());
    if (!j.at("second_model").is_null()) {
      apply_setting(spec, "second_model", j.at("second_model").get<std::string>());
    }
    apply_setting(spec, "partner", j.at("partner").get<std::string>());
    apply_setting(spec, "statistic", j.at("statistic").get<std::string>());
    apply_setting(spec, "measure", j.at("measure").get<std::string>());
    spec.lengths = j.at("lengths").get<std::vector<std::size_t>>();
    spec.samples_per_subcollection = j.at("samples").get<std::size_t>();
    spec.subcollections = j.at("subcollections").get<std::size_t>();
    spec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception &e) {
    throw FormatError(std::string("bad spec JSON: ") + e.what());
  }
  return spec;
}

inline json to_json(const StatTable &t) {
  json rows = json::array();
  for (const auto &r : t.rows) {
    rows.push_back({{"n", r.n},
                    {"mean", r.mean},
                    {"stderr", r.std_error},
                    {"samples", r.samples},
                    {"degenerate_resamples", r.degenerate_resamples}});
  }
  return json{{"series", t.series}, {"rows", rows}};
}

inline json to_json(const FitResult &f) {
  return json{{"model", to_string(f.model)}, {"a", f.a},           {"stderr_a", f.stderr_a},
              {"b", f.b},                    {"stderr_b", f.stderr_b}, {"r2", f.r_squared}};
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline json run_metadata(std::uint64_t seed, std::string_view scale) {
  return json{{"seed", seed}, {"scale", scale}, {"timestamp", utc_timestamp()}, {"version", version_string()}};
}

/// Results document for a single experiment. `fit` is optional.
inline json experiment_document(const EnsembleSpec &spec, const StatTable &table, const FitResult *fit = nullptr) {
  json doc{{"metadata", run_metadata(spec.seed, "custom")}, {"spec", to_json(spec)}, {"table", to_json(table)}};
  doc["metadata"]["samples_per_subcollection"] = spec.samples_per_subcollection;
  doc["metadata"]["subcollections"] = spec.subcollections;
  if (fit) {
    doc["fit"] = to_json(*fit);
  }
  return doc;
}

inline json reproduce_document(const ReproduceResult &r) {
  json series = json::array();
  for (const auto &s : r.series) {
    series.push_back({{"spec", to_json(s.spec)}, {"table", to_json(s.table)}, {"fit", to_json(s.fit)}});
  }
  json conj = json::array();
  for (const auto &c : r.conjectures) {
    conj.push_back({{"name", c.name},
                    {"mean_squared_series", c.mean_squared_series},
                    {"mean_abs_series", c.mean_abs_series},
                    {"ratio", c.report.ratio},
                    {"ratio_mean", c.report.ratio_mean},
                    {"q", c.report.q},
                    {"b_abs", c.report.b_abs},
                    {"b_over_sqrt_q", c.report.b_over_sqrt_q},
                    {"b_approx_sqrt_q", c.report.b_approx_sqrt_q}});
  }
  return json{{"metadata", run_metadata(r.seed, to_string(r.scale))}, {"series", series}, {"conjectures", conj}};
}


// ---------------------------------------------------------------------------
// gnuplot

/// Script plotting each series CSV (columns of kStatHeader, one series per
/// file) with error bars and its fitted curve, one PNG per series.
inline void write_gnuplot_script(std::ostream &os, const std::vector<SeriesResult> &series,
                                 std::string_view csv_dir = "series") {
  os << "set datafile separator ','\n"
     << "set terminal pngcairo size 800,600\n"
     << "set key top left\n"
     << "set xlabel 'n'\n";
  for (const auto &s : series) {
    const auto &f = s.fit;
    std::string g = "x";
    if (f.model == FitModel::a_plus_b_n2) {
      g = "x**2";
    } else if (f.model == FitModel::a_plus_b_sqrt_n) {
      g = "sqrt(x)";
    }
    os << "\nset output '" << s.table.series << ".png'\n"
       << "set title '" << s.table.series << "'\n"
       << "plot '" << csv_dir << '/' << s.table.series << ".csv' skip 1 using 2:3:4 with yerrorbars title 'data', \\\n"
       << "     " << format_double(f.a) << " + " << format_double(f.b) << "*" << g << " title '"
       << to_string(f.model) << "'\n";
  }
}

}  // namespace entangle::io
