#include "nodalsyz/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <stdexcept>
#include <thread>

#include "nodalsyz/catalog.hpp"

namespace nodalsyz::sweep {

namespace {

int rank_order(Status s) {
  switch (s) {
    case Status::not_applicable:
      return 0;
    case Status::passed:
      return 1;
    case Status::partial:
      return 2;
    case Status::failed:
      return 3;
  }
  return 3;
}

Json ideal_json(const IdealSpec& ideal, const NodalCurve& x) {
  Json points = Json::array();
  for (const auto& p : ideal.points) {
    points.push_back({{"component", x.components()[p.component].id},
                      {"point", to_string(p.point)},
                      {"multiplicity", p.multiplicity}});
  }
  Json nodes = Json::array();
  for (const auto& n : ideal.nodes) nodes.push_back({{"node", x.nodes()[n.node].id}, {"a", n.a}, {"b", n.b}});
  return {{"points", points}, {"nodes", nodes}, {"colength", ideal.colength()}};
}

Json spanned_json(const SpannedVerdict& v, const NodalCurve& x) {
  Json j = {{"k", v.k}, {"verdict", v.label()}, {"ideals_checked", v.ideals_checked}};
  if (v.witness) {
    j["witness"] = ideal_json(*v.witness, x);
    j["witness_h0"] = v.witness_h0;
  }
  return j;
}

std::vector<std::vector<std::size_t>> all_component_sums(const NodalCurve& x) {
  const std::size_t c = x.component_count();
  if (c > kDefaultUnunsCap) throw std::invalid_argument("too many components to enumerate component sums");
  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << c); ++mask) {
    std::vector<std::size_t> m;
    for (std::size_t i = 0; i < c; ++i) {
      if (mask >> i & 1) m.push_back(i);
    }
    out.push_back(std::move(m));
  }
  return out;
}

CheckOutcome check_riemann_roch(const LineBundle& l) {
  const int g = arithmetic_genus(l.curve());
  const auto a = h0(l);
  const auto b = h1(l);
  const int expected = l.total_degree() - g + 1;
  const bool ok = static_cast<int>(a) - static_cast<int>(b) == expected;
  return {ok ? Status::passed : Status::failed,
          {{"h0", a}, {"h1", b}, {"deg", l.total_degree()}, {"g", g}, {"deg_minus_g_plus_1", expected}}};
}

CheckOutcome check_dualizing(const LineBundle& l) {
  const NodalCurve& x = l.curve();
  const int g = arithmetic_genus(x);
  const LineBundle omega = dualizing_sheaf(l.curve_ptr());
  const auto h = h0(omega);
  Json failures = Json::array();
  for (const auto& members : all_component_sums(x)) {
    const ComponentSum z(members);
    const int restricted = omega.degree_on(z);
    const int adjunction = dualizing_degree(x, z) + intersection_count(x, z);
    if (restricted != adjunction) failures.push_back({{"Z", members}, {"deg_omega_X_on_Z", restricted}, {"deg_omega_Z_plus_n_Z", adjunction}});
  }
  const bool ok = omega.total_degree() == 2 * g - 2 && static_cast<int>(h) == g && failures.empty();
  return {ok ? Status::passed : Status::failed,
          {{"deg_omega", omega.total_degree()}, {"g", g}, {"h0_omega", h}, {"adjunction_failures", failures}}};
}

CheckOutcome check_gzx(const LinearSystem& w) {
  const BoundReport b = compute_bounds(w);
  Json rows = Json::array();
  bool ok = true;
  for (const auto& c : b.components) {
    rows.push_back({{"component", w.bundle().curve().components()[c.component].id},
                    {"rank", c.g_zx},
                    {"formula", c.g_zx_formula}});
    ok = ok && c.g_zx == c.g_zx_formula;
  }
  return {ok ? Status::passed : Status::failed, {{"components", rows}}};
}

CheckOutcome check_vanishing(const LineBundle& l, const LinearSystem& w, const std::vector<LineBundle>& e,
                             const CheckOptions& o) {
  std::vector<std::pair<std::string, CoefficientBundle>> coeffs;
  if (e.empty()) {
    coeffs = catalog::standard_coefficients(l.curve_ptr());
  } else {
    coeffs.emplace_back("E", CoefficientBundle(e));
  }
  CheckOutcome out{Status::passed, Json::array()};
  for (const auto& [name, bundle] : coeffs) {
    const VanishingVerdict v = verify_vanishing(bundle, w, o.threshold_offset);
    Json j = {{"E", name},
              {"status", to_string(v.status)},
              {"threshold", v.threshold},
              {"t_first", v.t_first},
              {"t_last_checked", v.t_last_checked}};
    if (v.witness_t) {
      j["witness_t"] = *v.witness_t;
      j["witness_dim"] = v.witness_dim;
    }
    out.status = combine(out.status, v.status);
    out.detail.push_back(std::move(j));
  }
  return out;
}

Json np_json(const NpReport& r, const NodalCurve& x) {
  Json table = Json::array();
  for (const auto& t : r.table) table.push_back({{"p", t.p}, {"q", t.q}, {"dim", t.dim}});
  Json j = {{"status", to_string(r.status)}, {"p_max", r.p_max},       {"largest_p", r.largest_p},
            {"q_range", {r.q_low, r.q_high}}, {"degree_condition", r.degree_condition},
            {"partial", r.partial},            {"koszul", table}};
  if (r.probe) j["very_ample_probe"] = spanned_json(*r.probe, x);
  return j;
}

CheckOutcome check_np(const LinearSystem& w, const CheckOptions& o) {
  const LineBundle& l = w.bundle();
  const BoundReport b = compute_bounds(w);
  if (!w.is_complete()) {
    // No N_p verdict for incomplete systems; dimensions only.
    const int p_max = o.p_max.value_or(std::max(b.p_thm, 0));
    const int q_max = o.q_max.value_or(3);
    Json table = Json::array();
    for (int p = 0; p <= p_max; ++p) {
      for (int q = 2; q <= q_max; ++q) {
        table.push_back({{"p", p}, {"q", q}, {"dim", koszul_dim(p, q, structure_sheaf(l.curve_ptr()), w)}});
      }
    }
    return {Status::not_applicable, {{"reason", "incomplete W: dimensions only"}, {"koszul", table}}};
  }
  const int target = o.p_max ? std::min(*o.p_max, b.p_thm) : b.p_thm;
  const int p_max = o.p_max.value_or(std::max(b.p_thm, 0));
  const NpReport r = verify_np_direct(l, p_max);
  Json j = np_json(r, l.curve());
  j["p_thm"] = b.p_thm;
  j["p_cor1"] = b.p_cor1;
  j["p_cor2"] = b.p_cor2;
  if (r.status != NpStatus::verified) return {Status::not_applicable, j};
  if (r.largest_p >= target) return {Status::passed, j};
  return {r.partial ? Status::partial : Status::failed, j};
}

CheckOutcome check_duality(const LinearSystem& w, const CheckOptions& o) {
  const LineBundle& l = w.bundle();
  if (!w.is_complete()) return {Status::not_applicable, {{"reason", "W is not complete"}}};
  if (h1(l) != 0) return {Status::not_applicable, {{"reason", "h1(L) != 0"}}};
  const int m = static_cast<int>(w.dimension());
  int last = m - 2;
  if (o.duality_p_max >= 0) last = std::min(last, o.duality_p_max);
  CheckOutcome out{Status::passed, {{"m", m}, {"pairs", Json::array()}}};
  for (int p = 0; p <= last; ++p) {
    try {
      const DualityResult r = duality_check(p, l);
      out.detail["pairs"].push_back({{"p", p}, {"K_p2_O", r.k_p2}, {"K_dual0_omega", r.k_dual0}});
      if (!r.agree()) out.status = Status::failed;
    } catch (const SliceTooLarge& e) {
      out.status = combine(out.status, Status::partial);
      out.detail["partial_at_p"] = p;
      break;
    }
  }
  return out;
}

CheckOutcome check_jlemma(const LineBundle& l) {
  CheckOutcome out{Status::passed, {{"cases", 0}, {"failures", Json::array()}}};
  const NodalCurve& x = l.curve();
  if (x.node_count() == 0) return {Status::not_applicable, {{"reason", "no nodes"}}};
  int cases = 0;
  for (std::size_t node = 0; node < x.node_count(); ++node) {
    for (int a = 1; a <= 3; ++a) {
      for (int b = 1; b <= a && a + b - 1 <= 3; ++b) {
        for (bool swap : {false, true}) {
          if (swap && a == b) continue;
          const JLemmaResult r = jlemma_transport(l, node, a, b, swap);
          ++cases;
          if (!r.holds()) {
            out.status = Status::failed;
            out.detail["failures"].push_back({{"node", x.nodes()[node].id},
                                              {"a", a},
                                              {"b", b},
                                              {"swap", swap},
                                              {"ununs_before", r.ununs_before},
                                              {"ununs_after", r.ununs_after}});
          }
        }
      }
    }
  }
  out.detail["cases"] = cases;
  return out;
}

CheckOutcome check_warmup(const LineBundle& l) {
  const WarmupReport r = warmup_checks(l);
  Json j = {{"ununs", r.ununs},
            {"expected_dimension_claimed", r.expected_dimension_claimed},
            {"h0", r.h0},
            {"expected_h0", r.expected_h0},
            {"h0_omega_minus_L", r.h0_omega_minus_l}};
  if (r.spanned) j["spanned"] = spanned_json(*r.spanned, l.curve());
  if (!r.expected_dimension_claimed) return {Status::not_applicable, j};
  return {r.passed() ? Status::passed : Status::failed, j};
}

CheckOutcome check_green(const LinearSystem& w, const CheckOptions& o) {
  const LineBundle& l = w.bundle();
  const NodalCurve& x = l.curve();
  if (x.component_count() != 1) return {Status::not_applicable, {{"reason", "reducible curve"}}};
  CheckOutcome out{Status::passed, Json::array()};
  const LineBundle o_x = structure_sheaf(l.curve_ptr());
  for (int d = 0; d <= o.green_e_max; ++d) {
    const LineBundle e = d == 0 ? o_x : twist_by_divisor(o_x, {{0, catalog::smooth_point(x, 0), d}});
    const LinearSystem v = LinearSystem::complete(e);
    for (int t = static_cast<int>(v.dimension()); t <= static_cast<int>(w.dimension()); ++t) {
      const InjectivityResult r = green_injectivity_check(t, w, v);
      out.detail.push_back({{"deg_E", d}, {"t", t}, {"rank", r.rank}, {"source_dim", r.source_dim}});
      if (!r.injective()) out.status = Status::failed;
    }
  }
  return out;
}

CheckOutcome check_hypothesis(const LineBundle& l) {
  const HypothesisReport r = hypothesis_kununs_np(l);
  Json j = {{"k", r.k}, {"tested", r.tested}};
  if (r.np) j["np"] = np_json(*r.np, l.curve());
  if (!r.tested) return {Status::not_applicable, j};
  j["counterexample_candidate"] = !r.agrees();
  // An open hypothesis: disagreement is reported, never a failure.
  return {r.agrees() ? Status::passed : Status::not_applicable, j};
}

std::string degrees_key(const std::vector<int>& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s;
}

}  // namespace

const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> n{"riemann-roch", "dualizing", "gzx",         "vanishing", "np",
                                          "duality",      "jlemma",    "warmup",      "green-lemma",
                                          "hypothesis"};
  return n;
}

Status combine(Status a, Status b) { return rank_order(a) >= rank_order(b) ? a : b; }

CheckOutcome run_check(const std::string& theorem, const LineBundle& l, const LinearSystem& w,
                       const std::vector<LineBundle>& e, const CheckOptions& options) {
  require_same_curve(l.curve(), w.bundle().curve());
  if (theorem == "riemann-roch") return check_riemann_roch(l);
  if (theorem == "dualizing") return check_dualizing(l);
  if (theorem == "gzx") return check_gzx(w);
  if (theorem == "vanishing") return check_vanishing(l, w, e, options);
  if (theorem == "np") return check_np(w, options);
  if (theorem == "duality") return check_duality(w, options);
  if (theorem == "jlemma") return check_jlemma(l);
  if (theorem == "warmup") return check_warmup(l);
  if (theorem == "green-lemma") return check_green(w, options);
  if (theorem == "hypothesis") return check_hypothesis(l);
  throw std::invalid_argument("unknown theorem \"" + theorem + "\"");
}

Config parse_config(const io::Document& doc) {
  const Json& j = doc.json;
  auto bad = [&](const std::string& field, const std::string& msg) -> io::InputError {
    return io::InputError(doc.source + ": " + field + ": " + msg);
  };
  if (!j.is_object()) throw bad("<root>", "expected an object");
  static const std::vector<std::string> known{"catalog",  "degree_min", "degree_max",       "gluings",
                                              "systems",  "theorems",   "threshold_offset", "p_max",
                                              "duality_p_max", "green_e_max", "threads"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) throw bad(it.key(), "unknown field");
  }
  Config c;
  auto strings = [&](const char* key, std::vector<std::string>& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_array()) throw bad(key, "expected a list of strings");
    out.clear();
    for (const auto& v : j.at(key)) {
      if (!v.is_string()) throw bad(key, "expected a list of strings");
      out.push_back(v.get<std::string>());
    }
  };
  auto integer = [&](const char* key, int& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer()) throw bad(key, "expected an integer");
    out = j.at(key).get<int>();
  };
  if (!j.contains("catalog")) throw bad("catalog", "missing");
  strings("catalog", c.catalog);
  if (c.catalog.empty()) throw bad("catalog", "empty catalog");
  integer("degree_min", c.degree_min);
  integer("degree_max", c.degree_max);
  if (c.degree_min > c.degree_max) throw bad("degree_min", "exceeds degree_max");
  strings("gluings", c.gluings);
  for (const auto& g : c.gluings) {
    if (g != "ones" && g != "random") throw bad("gluings", "expected \"ones\" or \"random\", got \"" + g + "\"");
  }
  strings("systems", c.systems);
  for (const auto& s : c.systems) {
    if (s != "complete" && s != "hyperplane") throw bad("systems", "expected \"complete\" or \"hyperplane\", got \"" + s + "\"");
  }
  c.theorems = theorem_names();
  c.theorems.pop_back();  // the hypothesis report is opt-in
  strings("theorems", c.theorems);
  for (const auto& t : c.theorems) {
    if (std::find(theorem_names().begin(), theorem_names().end(), t) == theorem_names().end()) {
      throw bad("theorems", "unknown theorem \"" + t + "\"");
    }
  }
  integer("threshold_offset", c.options.threshold_offset);
  if (j.contains("p_max")) {
    int p = 0;
    integer("p_max", p);
    c.options.p_max = p;
  }
  integer("duality_p_max", c.options.duality_p_max);
  integer("green_e_max", c.options.green_e_max);
  int threads = 1;
  integer("threads", threads);
  if (threads < 0) throw bad("threads", "must be >= 0");
  c.threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : static_cast<unsigned>(threads);
  return c;
}

LinearSystem Instance::linear_system() const {
  auto space = std::make_shared<const SectionSpace>(bundle);
  if (system == "hyperplane") return catalog::random_hyperplane(space, seed ^ 0x9e3779b97f4a7c15ULL);
  return LinearSystem::complete(space);
}

int Instance::size() const {
  int s = 0;
  for (int d : bundle.degrees()) s += std::abs(d);
  return s;
}

std::vector<Instance> instances(const Config& config, std::uint64_t seed) {
  std::vector<Instance> out;
  for (const auto& name : config.catalog) {
    CurvePtr x;
    const auto& known = catalog::names();
    if (std::find(known.begin(), known.end(), name) != known.end()) {
      x = catalog::curve(name);
    } else {
      x = io::parse_curve(io::read_document(name));
    }
    if (!x->connected()) throw io::InputError(name + ": sweep curves must be connected");
    const std::size_t c = x->component_count();
    std::vector<int> deg(c, config.degree_min);
    while (true) {
      for (const auto& mode : config.gluings) {
        if (mode == "random" && x->node_count() == 0) continue;
        for (const auto& sys : config.systems) {
          const std::string key = name + " deg=" + degrees_key(deg) + " glue=" + mode + " sys=" + sys;
          const std::uint64_t s = catalog::fnv1a(key, seed);
          std::vector<Rational> glue =
              mode == "random" ? catalog::random_gluings(*x, s) : std::vector<Rational>(x->node_count(), Rational(1));
          LineBundle l(x, deg, std::move(glue));
          if (sys == "hyperplane" && h0(l) < 2) continue;
          out.push_back(Instance{key, name, x, std::move(l), mode, sys, s});
        }
      }
      std::size_t i = 0;
      while (i < c && deg[i] == config.degree_max) deg[i++] = config.degree_min;
      if (i == c) break;
      ++deg[i];
    }
  }
  return out;
}

Result run(const Config& config, std::uint64_t seed) {
  const std::vector<Instance> list = instances(config, seed);
  std::vector<Json> rows(list.size());
  std::vector<Status> status(list.size(), Status::not_applicable);
  std::atomic<std::size_t> next{0};
  CheckOptions options = config.options;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next++;
      if (i >= list.size()) return;
      const Instance& inst = list[i];
      Json checks = Json::object();
      Status st = Status::not_applicable;
      try {
        const LinearSystem w = inst.linear_system();
        CheckOptions o = options;
        o.seed = inst.seed;
        for (const auto& t : config.theorems) {
          const CheckOutcome c = run_check(t, inst.bundle, w, {}, o);
          checks[t] = {{"status", to_string(c.status)}, {"detail", c.detail}};
          st = combine(st, c.status);
        }
      } catch (const std::exception& e) {
        checks["error"] = e.what();
        st = Status::failed;
      }
      rows[i] = {{"key", inst.key}, {"bundle", io::to_json(inst.bundle)}, {"checks", checks}, {"status", to_string(st)}};
      status[i] = st;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < config.threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Result r;
  Json inst = Json::array();
  std::size_t failed = 0;
  std::size_t partial = 0;
  std::optional<std::size_t> minimal;
  std::vector<std::size_t> order(list.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return list[a].key < list[b].key; });
  for (std::size_t i : order) {
    inst.push_back(std::move(rows[i]));
    if (status[i] == Status::partial) ++partial;
    if (status[i] != Status::failed) continue;
    ++failed;
    if (!minimal || list[i].size() < list[*minimal].size() ||
        (list[i].size() == list[*minimal].size() &&
         list[i].curve->component_count() < list[*minimal].curve->component_count())) {
      minimal = i;
    }
  }
  r.failed = failed > 0;
  r.report = {{"seed", seed},
              {"theorems", config.theorems},
              {"instances", inst},
              {"summary", {{"instances", list.size()}, {"failed", failed}, {"partial", partial}}}};
  if (minimal) {
    const Instance& m = list[*minimal];
    io::BundleSpec spec{m.bundle, std::nullopt, {}};
    if (m.system == "hyperplane") {
      const LinearSystem w = m.linear_system();
      std::vector<std::vector<Rational>> cols;
      for (std::size_t j = 0; j < w.dimension(); ++j) {
        std::vector<Rational> col(w.coefficients().rows());
        for (const auto& e : w.coefficients().column(j)) col[e.index] = e.value;
        cols.push_back(std::move(col));
      }
      spec.w = std::move(cols);
    }
    r.minimal_failure = Json{{"key", m.key}, {"curve", io::to_json(*m.curve)}, {"bundle", io::to_json(spec)}};
    r.report["minimal_failure"] = *r.minimal_failure;
  }
  return r;
}

}  // namespace nodalsyz::sweep
