#include <gtest/gtest.h>

#include "nodalsyz/catalog.hpp"
#include "nodalsyz/sweep.hpp"

using namespace nodalsyz;

namespace {

sweep::Config config_from(const std::string& text) {
  return sweep::parse_config(io::parse_document(text, "config.json"));
}

LineBundle bundle(const std::string& name, std::vector<int> degrees) {
  const auto x = catalog::curve(name);
  return LineBundle(x, std::move(degrees), std::vector<Rational>(x->node_count(), Rational(1)));
}

}  // namespace

TEST(SweepConfig, Defaults) {
  const sweep::Config c = config_from(R"({"catalog": ["F1", "F2"]})");
  EXPECT_EQ(c.degree_min, 0);
  EXPECT_EQ(c.degree_max, 5);
  EXPECT_EQ(c.gluings, (std::vector<std::string>{"ones", "random"}));
  EXPECT_EQ(c.systems, std::vector<std::string>{"complete"});
  EXPECT_EQ(std::find(c.theorems.begin(), c.theorems.end(), "hypothesis"), c.theorems.end());
  EXPECT_EQ(c.theorems.size(), sweep::theorem_names().size() - 1);
  EXPECT_EQ(c.threads, 1u);
}

TEST(SweepConfig, BundledFiles) {
  const sweep::Config d = sweep::parse_config(io::read_document(std::string(NODALSYZ_DATA_DIR) + "/sweep/default.json"));
  EXPECT_EQ(d.catalog, (std::vector<std::string>{"F1", "F2", "F3", "F4"}));
  const sweep::Config w =
      sweep::parse_config(io::read_document(std::string(NODALSYZ_DATA_DIR) + "/sweep/wrong_threshold.json"));
  EXPECT_EQ(w.options.threshold_offset, -1);
  EXPECT_THROW(sweep::parse_config(io::read_document(std::string(NODALSYZ_DATA_DIR) + "/sweep/empty.json")),
               io::InputError);
}

TEST(SweepConfig, Rejects) {
  EXPECT_THROW(config_from(R"({"catalog": []})"), io::InputError);
  EXPECT_THROW(config_from(R"({})"), io::InputError);
  EXPECT_THROW(config_from(R"({"catalog": ["F1"], "colour": 1})"), io::InputError);
  EXPECT_THROW(config_from(R"({"catalog": ["F1"], "gluings": ["some"]})"), io::InputError);
  EXPECT_THROW(config_from(R"({"catalog": ["F1"], "theorems": ["fermat"]})"), io::InputError);
  EXPECT_THROW(config_from(R"({"catalog": ["F1"], "degree_min": 3, "degree_max": 1})"), io::InputError);
  EXPECT_THROW(config_from(R"({"catalog": ["F1"], "threads": -1})"), io::InputError);
}

TEST(SweepInstances, Enumeration) {
  const sweep::Config c = config_from(
      R"({"catalog": ["F1", "F2"], "degree_min": 0, "degree_max": 1, "systems": ["complete", "hyperplane"]})");
  const auto list = sweep::instances(c, 1);
  // F1: degrees 0, 1; no random gluings without nodes; hyperplane needs h0 >= 2.
  // F2: 4 multidegrees x 2 gluing modes, plus hyperplanes except at (0, 0).
  std::size_t f1 = 0, f2 = 0;
  for (const auto& i : list) (i.curve_name == "F1" ? f1 : f2)++;
  EXPECT_EQ(f1, 3u);
  EXPECT_EQ(f2, 14u);
  for (const auto& i : list) {
    if (i.system == "hyperplane") EXPECT_EQ(i.linear_system().dimension() + 1, h0(i.bundle));
  }
  const auto again = sweep::instances(c, 1);
  for (std::size_t i = 0; i < list.size(); ++i) {
    EXPECT_EQ(list[i].key, again[i].key);
    EXPECT_EQ(list[i].bundle, again[i].bundle);
  }
}

TEST(SweepInstances, RandomGluingsDependOnSeed) {
  const sweep::Config c = config_from(R"({"catalog": ["F5"], "degree_min": 1, "degree_max": 1, "gluings": ["random"]})");
  const auto a = sweep::instances(c, 1);
  const auto b = sweep::instances(c, 2);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_NE(a[0].bundle.gluings(), b[0].bundle.gluings());
  for (const auto& g : a[0].bundle.gluings()) EXPECT_NE(g, 0);
}

TEST(RunCheck, EveryTheoremOnTheCycle) {
  const LineBundle l = bundle("F3", {4, 4});
  const LinearSystem w = LinearSystem::complete(l);
  for (const auto& t : sweep::theorem_names()) {
    const sweep::CheckOutcome o = sweep::run_check(t, l, w, {}, {});
    EXPECT_TRUE(o.status == Status::passed || o.status == Status::not_applicable) << t << ": " << o.detail.dump();
  }
  EXPECT_EQ(sweep::run_check("green-lemma", l, w, {}, {}).status, Status::not_applicable);
  EXPECT_THROW(sweep::run_check("fermat", l, w, {}, {}), std::invalid_argument);
}

TEST(RunCheck, IncompleteSystems) {
  const LineBundle l = bundle("F3", {3, 3});
  const LinearSystem w = catalog::random_hyperplane(std::make_shared<const SectionSpace>(l), 4);
  EXPECT_EQ(sweep::run_check("np", l, w, {}, {}).status, Status::not_applicable);
  EXPECT_EQ(sweep::run_check("duality", l, w, {}, {}).status, Status::not_applicable);
  EXPECT_EQ(sweep::run_check("vanishing", l, w, {}, {}).status, Status::passed);
}

TEST(RunCheck, ExplicitCoefficientBundle) {
  const LineBundle l = bundle("F1", {3});
  const LinearSystem w = LinearSystem::complete(l);
  sweep::CheckOptions o;
  o.threshold_offset = -1;
  const sweep::CheckOutcome out = sweep::run_check("vanishing", l, w, {structure_sheaf(l.curve_ptr())}, o);
  EXPECT_EQ(out.status, Status::failed);
  EXPECT_EQ(out.detail[0]["witness_t"], 0);
}

TEST(Combine, Ordering) {
  EXPECT_EQ(sweep::combine(Status::passed, Status::failed), Status::failed);
  EXPECT_EQ(sweep::combine(Status::partial, Status::passed), Status::partial);
  EXPECT_EQ(sweep::combine(Status::failed, Status::partial), Status::failed);
  EXPECT_EQ(sweep::combine(Status::not_applicable, Status::passed), Status::passed);
}

TEST(Sweep, DeterministicAndSortedByKey) {
  const sweep::Config c = config_from(
      R"({"catalog": ["F2", "F1"], "degree_min": 1, "degree_max": 2, "theorems": ["riemann-roch", "vanishing"]})");
  const sweep::Result a = sweep::run(c, 9);
  sweep::Config threaded = c;
  threaded.threads = 3;
  const sweep::Result b = sweep::run(threaded, 9);
  EXPECT_FALSE(a.failed);
  EXPECT_EQ(io::dump(a.report), io::dump(b.report));
  const auto& inst = a.report["instances"];
  for (std::size_t i = 1; i < inst.size(); ++i) {
    EXPECT_LT(inst[i - 1]["key"].get<std::string>(), inst[i]["key"].get<std::string>());
  }
}

TEST(Sweep, WrongThresholdReportsMinimalFailure) {
  const sweep::Config c = config_from(
      R"({"catalog": ["F2", "F1"], "degree_min": 1, "degree_max": 3, "gluings": ["ones"], "theorems": ["vanishing"],
          "threshold_offset": -1})");
  const sweep::Result r = sweep::run(c, 1);
  EXPECT_TRUE(r.failed);
  ASSERT_TRUE(r.minimal_failure.has_value());
  EXPECT_EQ((*r.minimal_failure)["key"], "F1 deg=1 glue=ones sys=complete");
  // The replay file parses back into the same instance.
  const std::string text = io::dump(*r.minimal_failure);
  const io::Document doc = io::parse_document(text, "replay.json");
  const CurvePtr x = io::parse_curve(doc);
  const io::BundleSpec spec = io::parse_bundle(doc, x);
  EXPECT_EQ(spec.bundle.degrees(), std::vector<int>{1});
  sweep::CheckOptions o;
  o.threshold_offset = -1;
  EXPECT_EQ(sweep::run_check("vanishing", spec.bundle, io::linear_system(spec), {}, o).status, Status::failed);
}
