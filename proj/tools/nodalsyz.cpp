// Command-line front end: sections, koszul, bounds, verify, ununs, spanned,
// sweep.  Exit codes: 0 pass, 1 a verdict failed, 2 input error.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "nodalsyz/catalog.hpp"
#include "nodalsyz/io.hpp"
#include "nodalsyz/koszul.hpp"
#include "nodalsyz/sweep.hpp"
#include "nodalsyz/theorems.hpp"

namespace {

using nodalsyz::io::Json;
namespace io = nodalsyz::io;
namespace sweep = nodalsyz::sweep;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

struct Inputs {
  io::Document curve_doc;
  std::optional<io::Document> bundle_doc;
  nodalsyz::CurvePtr curve;
  std::optional<io::BundleSpec> spec;
  std::string hash;
};

Inputs load(const std::string& curve_path, const std::string& bundle_path, bool need_bundle) {
  Inputs in{io::read_document(curve_path), std::nullopt, nullptr, std::nullopt, ""};
  in.curve = io::parse_curve(in.curve_doc);
  std::vector<std::string> texts{in.curve_doc.text};
  if (!bundle_path.empty()) {
    in.bundle_doc = io::read_document(bundle_path);
    in.spec = io::parse_bundle(*in.bundle_doc, in.curve);
    texts.push_back(in.bundle_doc->text);
  } else if (in.curve_doc.json.contains("bundle")) {
    in.spec = io::parse_bundle(in.curve_doc, in.curve);
  } else if (need_bundle) {
    throw io::InputError(curve_path + ": no bundle given (pass a bundle file or a combined curve+bundle file)");
  }
  in.hash = io::input_hash(texts);
  return in;
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& v) { return v.is_structured(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const Json& report, bool json) {
  if (json) {
    std::cout << io::dump(report);
  } else {
    flatten(report, "", std::cout);
  }
}

Json section_basis(const nodalsyz::SectionSpace& s) {
  Json out = Json::array();
  for (std::size_t j = 0; j < s.dimension(); ++j) out.push_back(io::to_json(s.section(j), s.bundle().curve()));
  return out;
}

std::vector<nodalsyz::ProbePoint> parse_probes(const std::vector<std::string>& specs, const nodalsyz::NodalCurve& x) {
  std::vector<nodalsyz::ProbePoint> out;
  for (const auto& s : specs) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw io::InputError("--probe " + s + ": expected COMPONENT:POINT");
    try {
      out.push_back({x.component_index(s.substr(0, colon)), nodalsyz::parse_rational(s.substr(colon + 1))});
    } catch (const std::invalid_argument& e) {
      throw io::InputError("--probe " + s + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Koszul cohomology and syzygy bounds on nodal curves with rational components"};
  app.require_subcommand(1);

  std::string curve_path;
  std::string bundle_path;
  bool json = false;
  bool timing = false;
  int p = 0;
  int q = 0;
  int k = 1;
  std::string theorem = "all";
  std::optional<int> p_max;
  std::optional<int> q_max;
  int threshold_offset = 0;
  int duality_p_max = -1;
  bool basis = false;
  std::vector<std::string> probes;
  std::string config_path;
  std::uint64_t seed = 1;
  std::string replay_path = "sweep-failure.json";
  int threads = -1;

  auto add_inputs = [&](CLI::App* sub, bool bundle_required) {
    sub->add_option("curve", curve_path, "curve JSON file (or combined {curve, bundle} file)")->required();
    auto* b = sub->add_option("bundle", bundle_path, "bundle JSON file");
    if (bundle_required) b->description("bundle JSON file (optional with a combined file)");
    sub->add_flag("--json", json, "emit the JSON report");
    sub->add_flag("--timing", timing, "add wall-clock timing to the report (breaks byte-identical output)");
  };

  auto* sections = app.add_subcommand("sections", "h0, h1 and optionally a basis of global sections");
  add_inputs(sections, true);
  sections->add_flag("--basis", basis, "dump basis sections as polynomial blocks");

  auto* koszul = app.add_subcommand("koszul", "dim K_{p,q}(X; B, L, W), B = sum of E (default O)");
  add_inputs(koszul, true);
  koszul->add_option("-p", p, "p")->required();
  koszul->add_option("-q", q, "q")->required();

  auto* bounds = app.add_subcommand("bounds", "per-component invariants and predicted thresholds");
  add_inputs(bounds, true);

  auto* verify = app.add_subcommand("verify", "check a statement on one instance");
  add_inputs(verify, true);
  std::vector<std::string> choices = sweep::theorem_names();
  choices.push_back("all");
  verify->add_option("--theorem", theorem, "statement to check")->check(CLI::IsMember(choices));
  verify->add_option("--p-max", p_max, "largest p for N_p / Koszul tables");
  verify->add_option("--q-max", q_max, "largest q for Koszul tables of incomplete systems");
  verify->add_option("--threshold-offset", threshold_offset, "shift of the vanishing threshold (sharpness probing)");
  verify->add_option("--duality-p-max", duality_p_max, "largest p in the duality identity (-1: all)");

  auto* ununs = app.add_subcommand("ununs", "k-nuns level of every subcurve and the k-ununs level");
  add_inputs(ununs, true);

  auto* spanned = app.add_subcommand("spanned", "probe k-spannedness");
  add_inputs(spanned, true);
  spanned->add_option("-k", k, "colength bound")->required()->check(CLI::PositiveNumber);
  spanned->add_option("--probe", probes, "smooth probe point COMPONENT:POINT (default: two per component)")
      ->allow_extra_args(false);

  auto* sweep_cmd = app.add_subcommand("sweep", "run a verification sweep from a config file");
  sweep_cmd->add_option("--config", config_path, "sweep config JSON")->required();
  sweep_cmd->add_option("--seed", seed, "seed for random gluings and subspaces");
  sweep_cmd->add_option("--replay", replay_path, "where to write the minimal failing instance");
  sweep_cmd->add_option("--threads", threads, "worker threads (overrides the config; 0 = all cores)");
  sweep_cmd->add_flag("--json", json, "emit the JSON report");
  sweep_cmd->add_flag("--timing", timing, "add wall-clock timing to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  std::string echo;
  for (int i = 1; i < argc; ++i) echo += (i > 1 ? " " : "") + std::string(argv[i]);
  const auto start = std::chrono::steady_clock::now();
  Json report = {{"command", echo}};
  int rc = kPass;

  try {
    if (app.got_subcommand(sweep_cmd)) {
      const io::Document doc = io::read_document(config_path);
      sweep::Config config = sweep::parse_config(doc);
      if (threads >= 0) config.threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
      report["input_hash"] = io::input_hash({doc.text});
      const sweep::Result r = sweep::run(config, seed);
      report["sweep"] = r.report;
      if (r.minimal_failure) {
        std::ofstream(replay_path) << io::dump(*r.minimal_failure);
        report["replay_file"] = replay_path;
        std::cerr << "minimal failing instance: " << (*r.minimal_failure)["key"].get<std::string>() << " (written to "
                  << replay_path << ")\n"
                  << io::dump(*r.minimal_failure);
      }
      report["verdict"] = r.failed ? "FAIL" : "PASS";
      rc = r.failed ? kFail : kPass;
    } else {
      const Inputs in = load(curve_path, bundle_path, true);
      report["input_hash"] = in.hash;
      const nodalsyz::LineBundle& l = in.spec->bundle;
      const nodalsyz::LinearSystem w = io::linear_system(*in.spec);
      if (app.got_subcommand(sections)) {
        const nodalsyz::SectionSpace s(l);
        report["h0"] = s.dimension();
        report["deg"] = l.total_degree();
        if (l.curve().connected()) {
          report["h1"] = nodalsyz::h1(l);
          report["g"] = nodalsyz::arithmetic_genus(l.curve());
        }
        if (basis) report["basis"] = section_basis(s);
      } else if (app.got_subcommand(koszul)) {
        std::vector<nodalsyz::LineBundle> summands = in.spec->e;
        if (summands.empty()) summands.push_back(nodalsyz::structure_sheaf(in.curve));
        std::size_t total = 0;
        Json parts = Json::array();
        for (const auto& b : summands) {
          Json part = {{"summand", io::to_json(b)}};
          if (p >= 0 && static_cast<std::size_t>(p) <= w.dimension()) {
            const nodalsyz::KoszulSlice s = nodalsyz::build_slice(p, q, b, w);
            const std::size_t d = s.homology();
            part["dims"] = {s.left_dim, s.middle_dim, s.right_dim};
            part["K"] = d;
            total += d;
          } else {
            part["K"] = 0;
          }
          parts.push_back(std::move(part));
        }
        report["p"] = p;
        report["q"] = q;
        report["m"] = w.dimension();
        report["summands"] = parts;
        report["K"] = total;
      } else if (app.got_subcommand(bounds)) {
        std::optional<nodalsyz::CoefficientBundle> e;
        if (!in.spec->e.empty()) e.emplace(in.spec->e);
        const nodalsyz::BoundReport b = nodalsyz::compute_bounds(w, e ? &*e : nullptr);
        Json comps = Json::array();
        for (const auto& c : b.components) {
          Json j = {{"component", l.curve().components()[c.component].id},
                    {"deg", c.deg},
                    {"g_Z", c.g},
                    {"n_Z", c.n},
                    {"b0_complement", c.b0_plus},
                    {"m_Z", c.m_z},
                    {"g_ZX", c.g_zx},
                    {"g_ZX_formula", c.g_zx_formula}};
          if (c.e_z) j["e_Z"] = *c.e_z;
          comps.push_back(std::move(j));
        }
        report["components"] = comps;
        report["m"] = b.m;
        report["p_thm"] = b.p_thm;
        report["p_cor1"] = b.p_cor1;
        report["p_cor2"] = b.p_cor2;
        report["t_threshold_omega"] = b.t_threshold_omega;
        if (b.t_threshold) report["t_threshold"] = *b.t_threshold;
        if (b.ununs_level) report["ununs_level"] = *b.ununs_level;
        report["note"] = "negative p bounds mean no prediction";
      } else if (app.got_subcommand(verify)) {
        sweep::CheckOptions o;
        o.p_max = p_max;
        o.q_max = q_max;
        o.threshold_offset = threshold_offset;
        o.duality_p_max = duality_p_max;
        std::vector<std::string> list;
        if (theorem == "all") {
          list = sweep::theorem_names();
          list.pop_back();  // hypothesis is opt-in
        } else {
          list.push_back(theorem);
        }
        Json verdicts = Json::object();
        nodalsyz::Status overall = nodalsyz::Status::not_applicable;
        for (const auto& t : list) {
          const sweep::CheckOutcome c = sweep::run_check(t, l, w, in.spec->e, o);
          verdicts[t] = {{"status", nodalsyz::to_string(c.status)}, {"detail", c.detail}};
          overall = sweep::combine(overall, c.status);
        }
        report["verdicts"] = verdicts;
        report["verdict"] = nodalsyz::to_string(overall);
        report["partial"] = overall == nodalsyz::Status::partial;
        rc = overall == nodalsyz::Status::failed ? kFail : kPass;
      } else if (app.got_subcommand(ununs)) {
        const nodalsyz::NodalCurve& x = l.curve();
        if (x.component_count() > nodalsyz::kDefaultUnunsCap) {
          throw io::InputError("ununs enumeration refused: more than 12 components");
        }
        Json rows = Json::array();
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << x.component_count()); ++mask) {
          std::vector<std::size_t> members;
          Json ids = Json::array();
          for (std::size_t i = 0; i < x.component_count(); ++i) {
            if (mask >> i & 1) {
              members.push_back(i);
              ids.push_back(x.components()[i].id);
            }
          }
          const nodalsyz::ComponentSum y(members);
          rows.push_back({{"Y", ids},
                          {"deg_L", l.degree_on(y)},
                          {"deg_omega", nodalsyz::dualizing_degree(x, y)},
                          {"nuns", nodalsyz::nuns_level(y, l)}});
        }
        report["subcurves"] = rows;
        report["ununs_level"] = nodalsyz::ununs_level(l);
      } else if (app.got_subcommand(spanned)) {
        const auto pts = probes.empty() ? nodalsyz::default_probe_points(l.curve()) : parse_probes(probes, l.curve());
        const nodalsyz::SpannedVerdict v = nodalsyz::spanned_probe(l, k, pts);
        Json jp = Json::array();
        for (const auto& pt : pts) jp.push_back(l.curve().components()[pt.component].id + ":" + nodalsyz::to_string(pt.point));
        report["k"] = k;
        report["probes"] = jp;
        report["verdict"] = v.label();
        report["ideals_checked"] = v.ideals_checked;
        if (v.witness) {
          Json pts_json = Json::array();
          for (const auto& c : v.witness->points) {
            pts_json.push_back({{"component", l.curve().components()[c.component].id},
                                {"point", nodalsyz::to_string(c.point)},
                                {"multiplicity", c.multiplicity}});
          }
          Json nodes_json = Json::array();
          for (const auto& c : v.witness->nodes) {
            nodes_json.push_back({{"node", l.curve().nodes()[c.node].id}, {"a", c.a}, {"b", c.b}});
          }
          report["witness"] = {{"points", pts_json}, {"nodes", nodes_json}, {"h0", v.witness_h0}};
        }
      }
    }
  } catch (const io::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const nodalsyz::SliceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  if (timing) {
    report["timing_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  emit(report, json);
  return rc;
}
