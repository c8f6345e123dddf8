#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "entangle/io.hpp"
#include "support.hpp"

using namespace entangle;

TEST(FormatDouble, RoundTripsBitwise) {
  KeyedRng rng(1);
  for (int k = 0; k < 10000; ++k) {
    std::uint64_t bits = rng();
    double x;
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) {
      continue;
    }
    const double y = io::parse_double(io::format_double(x));
    ASSERT_EQ(std::memcmp(&x, &y, sizeof x), 0) << io::format_double(x);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_THROW(io::parse_double("1.5x"), FormatError);
  EXPECT_THROW(io::parse_uint("-3"), FormatError);
}

TEST(ChainFile, RoundTripIsExact) {
  KeyedRng rng(2);
  for (int k = 0; k < 50; ++k) {
    for (const Chain &c : {gen_uniform_walk(15, rng), gen_uniform_polygon(15, rng), gen_equilateral_walk(15, rng)}) {
      std::stringstream ss;
      io::write_chain(ss, c);
      EXPECT_EQ(io::read_chain(ss), c);
    }
  }
}

TEST(ChainFile, HeaderFormat) {
  std::stringstream ss;
  io::write_chain(ss, fixed_square());
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "# chain closed=true n=4");
  std::string first;
  std::getline(ss, first);
  EXPECT_EQ(first, "0.1 0.1 0.5");

  std::stringstream open;
  io::write_chain(open, Chain({{0, 0, 0}, {1, 0, 0}}, false));
  std::getline(open, header);
  EXPECT_EQ(header, "# chain closed=false n=1");
}

TEST(ChainFile, RejectsMalformedInput) {
  auto parse = [](const std::string &text) {
    std::istringstream is(text);
    return io::read_chain(is);
  };
  EXPECT_THROW(parse(""), FormatError);
  EXPECT_THROW(parse("chain closed=true n=3\n0 0 0\n1 0 0\n0 1 0\n"), FormatError);
  EXPECT_THROW(parse("# chain closed=maybe n=3\n0 0 0\n1 0 0\n0 1 0\n"), FormatError);
  EXPECT_THROW(parse("# chain closed=true n=4\n0 0 0\n1 0 0\n0 1 0\n"), FormatError);
  EXPECT_THROW(parse("# chain closed=false n=1\n0 0\n1 0 0\n"), FormatError);
  EXPECT_THROW(parse("# chain closed=false n=1\n0 0 0 1\n1 0 0\n"), FormatError);
  EXPECT_THROW(parse("# chain closed=false n=1\n0 0 a\n1 0 0\n"), FormatError);
  EXPECT_NO_THROW(parse("# chain closed=false n=1\n\n0 0 0\n# comment\n1 0 0\n"));
}

TEST(StatCsv, RoundTrip) {
  std::vector<StatTable> tables = {{"a", {{10, 1.25, 0.1, 2000, 0}, {20, 0.1 + 0.2, 1e-17, 2000, 3}}},
                                   {"b", {{5, -3.0, 0.0, 7, 1}}}};
  std::stringstream ss;
  io::write_stat_csv(ss, tables);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "series,n,mean,stderr,samples,degenerate_resamples");
  EXPECT_EQ(io::read_stat_csv(ss), tables);
}

TEST(StatCsv, RejectsBadInput) {
  std::istringstream no_header("a,10,1,0,1,0\n");
  EXPECT_THROW(io::read_stat_csv(no_header), FormatError);
  std::istringstream short_row("series,n,mean,stderr,samples,degenerate_resamples\na,10,1\n");
  EXPECT_THROW(io::read_stat_csv(short_row), FormatError);
}

TEST(FitCsv, RowFormat) {
  std::ostringstream os;
  io::write_fit_csv_row(os, "s", FitResult{FitModel::a_plus_b_n2, 1.5, 0.25, 0.5, 0.125, 0.75});
  EXPECT_EQ(os.str(), "s,a_plus_b_n2,1.5,0.5,0.25,0.125,0.75\n");
}

TEST(SpecFile, RoundTripAndOverrides) {
  EnsembleSpec spec;
  spec.name = "walk.abs_linking";
  spec.model = ChainModel::uniform_walk;
  spec.second_model = ChainModel::uniform_walk;
  spec.measure = MeasureKind::linking;
  spec.statistic = Statistic::mean_abs;
  spec.lengths = {10, 30, 50};
  spec.samples_per_subcollection = 123;
  spec.subcollections = 4;
  spec.seed = 18446744073709551615ULL;
  std::stringstream ss;
  io::write_spec(ss, spec);
  const EnsembleSpec back = io::read_spec(ss);
  EXPECT_EQ(io::to_json(back), io::to_json(spec));
  EXPECT_EQ(io::to_json(io::spec_from_json(io::to_json(spec))), io::to_json(spec));

  EnsembleSpec over = back;
  io::apply_setting(over, "seed", "7");
  io::apply_setting(over, "second_model", "none");
  EXPECT_EQ(over.seed, 7u);
  EXPECT_FALSE(over.second_model);
}

TEST(SpecFile, ParsesRangesCommentsAndRejectsUnknownKeys) {
  std::istringstream is("# comment\n\nmodel = uniform_polygon\nlengths=10:60:10\nstatistic=mean\n");
  const EnsembleSpec s = io::read_spec(is);
  EXPECT_EQ(s.model, ChainModel::uniform_polygon);
  EXPECT_EQ(s.lengths, (std::vector<std::size_t>{10, 20, 30, 40, 50, 60}));
  EXPECT_EQ(s.statistic, Statistic::mean);
  EXPECT_EQ(io::parse_lengths("5, 7 ,9"), (std::vector<std::size_t>{5, 7, 9}));

  std::istringstream bad_key("colour=blue\n");
  EXPECT_THROW(io::read_spec(bad_key), FormatError);
  std::istringstream bad_value("model=spiral\n");
  EXPECT_THROW(io::read_spec(bad_value), FormatError);
  std::istringstream no_eq("model\n");
  EXPECT_THROW(io::read_spec(no_eq), FormatError);
  EXPECT_THROW(io::parse_lengths("10:60"), FormatError);
  EXPECT_THROW(io::parse_lengths("10:60:0"), FormatError);
}

TEST(Json, ExperimentDocumentCarriesSpecAndMetadata) {
  EnsembleSpec spec;
  spec.lengths = {10};
  spec.samples_per_subcollection = 500;
  spec.subcollections = 10;
  spec.seed = 5;
  const StatTable t{"x", {{10, 1.0, 0.1, 5000, 0}}};
  const FitResult f{};
  const auto doc = io::experiment_document(spec, t, &f);
  EXPECT_EQ(doc["metadata"]["seed"], 5);
  EXPECT_EQ(doc["metadata"]["samples_per_subcollection"], 500);
  EXPECT_EQ(doc["metadata"]["subcollections"], 10);
  EXPECT_TRUE(doc["metadata"]["timestamp"].is_string());
  EXPECT_TRUE(doc["metadata"]["version"].is_string());
  EXPECT_EQ(doc["table"]["rows"][0]["samples"], 5000);
  EXPECT_TRUE(doc.contains("fit"));
  EXPECT_EQ(io::to_json(io::spec_from_json(doc["spec"])), io::to_json(spec));
  EXPECT_THROW(io::spec_from_json(nlohmann::json{{"name", "x"}}), FormatError);
}

TEST(Gnuplot, ScriptMentionsEverySeries) {
  std::vector<SeriesResult> series(2);
  series[0].table.series = "walk.msq_writhe";
  series[0].fit.model = FitModel::a_plus_b_n2;
  series[1].table.series = "walk.abs_linking_square";
  series[1].fit.model = FitModel::a_plus_b_sqrt_n;
  std::ostringstream os;
  io::write_gnuplot_script(os, series);
  const std::string s = os.str();
  EXPECT_NE(s.find("series/walk.msq_writhe.csv"), std::string::npos);
  EXPECT_NE(s.find("x**2"), std::string::npos);
  EXPECT_NE(s.find("sqrt(x)"), std::string::npos);
}
