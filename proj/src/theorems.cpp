#include "nodalsyz/theorems.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <random>
#include <stdexcept>

namespace nodalsyz {

namespace {

bool point_in_use(const Component& c, const Rational& p) {
  return std::find(c.branch_points.begin(), c.branch_points.end(), p) != c.branch_points.end() ||
         std::find(c.marked_points.begin(), c.marked_points.end(), p) != c.marked_points.end();
}

int omega_degree_on(const NodalCurve& curve, std::size_t component) {
  return static_cast<int>(curve.components()[component].branch_points.size()) - 2;
}

}  // namespace

BoundReport compute_bounds(const LinearSystem& w, const CoefficientBundle* e, std::size_t ununs_cap) {
  const LineBundle& l = w.bundle();
  const NodalCurve& x = l.curve();
  if (!x.connected()) throw CurveError("bounds need a connected curve");
  if (e) require_same_curve(e->curve(), x);
  const SectionSpace omega(dualizing_sheaf(l.curve_ptr()));
  std::vector<SectionSpace> e_spaces;
  if (e) {
    for (const auto& s : e->summands()) e_spaces.emplace_back(s);
  }

  BoundReport r;
  r.m = static_cast<int>(w.dimension());
  r.p_thm = r.p_cor1 = r.p_cor2 = INT_MAX;
  r.t_threshold_omega = INT_MIN;
  int t_e = INT_MIN;
  for (std::size_t c = 0; c < x.component_count(); ++c) {
    const ComponentSum z = ComponentSum::single(c);
    ComponentBounds b;
    b.component = c;
    b.deg = l.degree(c);
    b.g = static_cast<int>(x.self_node_count(c));
    if (x.component_count() > 1) {
      b.n = intersection_count(x, z);
      b.b0_plus = connected_components_count(x, complement(x, z));
    }
    b.m_z = static_cast<int>(restriction_rank(w, z));
    b.g_zx = static_cast<int>(restriction_rank(omega, z));
    b.g_zx_formula = b.g + b.n - b.b0_plus;
    if (e) {
      int ez = 0;
      for (const auto& s : e_spaces) ez += static_cast<int>(restriction_rank(s, z));
      b.e_z = ez;
      t_e = std::max(t_e, ez - b.m_z + r.m);
    }
    r.p_thm = std::min(r.p_thm, b.m_z - b.g_zx - 2);
    r.p_cor1 = std::min(r.p_cor1, b.deg - b.g - b.g_zx - b.n - 1);
    r.p_cor2 = std::min(r.p_cor2, b.deg - 2 * b.g - 2 * b.n - 1 + b.b0_plus);
    r.t_threshold_omega = std::max(r.t_threshold_omega, b.g_zx - b.m_z + r.m);
    r.components.push_back(b);
  }
  if (e) r.t_threshold = t_e;
  if (x.component_count() <= ununs_cap) r.ununs_level = ununs_level(l, ununs_cap);
  return r;
}

int nuns_level(const ComponentSum& y, const LineBundle& l) {
  return l.degree_on(y) - dualizing_degree(l.curve(), y);
}

int ununs_level(const LineBundle& l, std::size_t cap) {
  const std::size_t c = l.curve().component_count();
  if (c > cap) {
    throw std::invalid_argument("ununs enumeration refused: " + std::to_string(c) + " components exceed the cap of " +
                                std::to_string(cap));
  }
  int best = INT_MAX;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << c); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < c; ++i) {
      if (mask >> i & 1) members.push_back(i);
    }
    best = std::min(best, nuns_level(ComponentSum(std::move(members)), l));
  }
  return best;
}

std::vector<ProbePoint> default_probe_points(const NodalCurve& curve, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ProbePoint> out;
  for (std::size_t c = 0; c < curve.component_count(); ++c) {
    const Component& comp = curve.components()[c];
    Rational fixed = 3;
    while (point_in_use(comp, fixed)) fixed += 1;
    out.push_back({c, fixed});
    while (true) {
      const std::uint64_t r = rng();
      Rational p(static_cast<long>(r % 97) - 48, static_cast<long>((r >> 32) % 13) + 1);
      p.canonicalize();
      if (p != fixed && !point_in_use(comp, p)) {
        out.push_back({c, p});
        break;
      }
    }
  }
  return out;
}

SpannedVerdict spanned_probe(const LineBundle& l, int k, const std::vector<ProbePoint>& probes) {
  if (k < 1) throw std::invalid_argument("spanned probe needs k >= 1");
  const SectionSpace space(l);
  const std::size_t h = space.dimension();
  const std::size_t nodes = l.curve().node_count();
  SpannedVerdict v;
  v.k = k;
  IdealSpec ideal;
  // Depth-first over supports: probes first, then nodes.
  std::function<void(std::size_t, int)> visit = [&](std::size_t pos, int used) {
    if (v.refuted) return;
    if (pos == probes.size() + nodes) {
      if (used == 0) return;
      ++v.ideals_checked;
      const std::size_t got = ideal_twisted_sections(space, ideal);
      if (static_cast<int>(h) - used < 0 || got != h - static_cast<std::size_t>(used)) {
        v.refuted = true;
        v.witness = ideal;
        v.witness_h0 = got;
      }
      return;
    }
    visit(pos + 1, used);
    if (pos < probes.size()) {
      for (int mult = 1; used + mult <= k && !v.refuted; ++mult) {
        ideal.points.push_back({probes[pos].component, probes[pos].point, mult});
        visit(pos + 1, used + mult);
        ideal.points.pop_back();
      }
    } else {
      const std::size_t node = pos - probes.size();
      for (int e = 1; used + e <= k && !v.refuted; ++e) {
        for (int a = 1; a <= e && !v.refuted; ++a) {
          ideal.nodes.push_back({node, a, e + 1 - a});
          visit(pos + 1, used + e);
          ideal.nodes.pop_back();
        }
      }
    }
  };
  visit(0, 0);
  return v;
}

SpannedVerdict spanned_probe(const LineBundle& l, int k) {
  return spanned_probe(l, k, default_probe_points(l.curve()));
}

JLemmaResult jlemma_transport(const LineBundle& l, std::size_t node, int a, int b, bool swap) {
  if (!(0 < b && b <= a)) throw std::invalid_argument("J-lemma transport needs 0 < b <= a");
  const NodalCurve& x = l.curve();
  if (node >= x.node_count()) throw std::invalid_argument("J-lemma transport at a missing node");
  JLemmaResult r;
  r.blown_up = std::make_shared<const NodalCurve>(blow_up_node(x, node));
  std::vector<Rational> glue;
  for (std::size_t i = 0; i < x.node_count(); ++i) {
    if (i != node) glue.push_back(l.gluings()[i]);
  }
  const LineBundle pulled(r.blown_up, l.degrees(), std::move(glue));
  const Node& n = x.nodes()[node];
  const int on_a = swap ? b : a;
  const int on_b = swap ? a : b;
  r.transported = twist_by_divisor(pulled, {{n.a.component, n.a.point, -on_a}, {n.b.component, n.b.point, -on_b}});
  r.e = a + b - 1;
  r.ununs_before = ununs_level(l);
  r.ununs_after = ununs_level(*r.transported);
  r.disconnected = !r.blown_up->connected();
  r.claimed = r.ununs_before - r.e > 0;
  return r;
}

WarmupReport warmup_checks(const LineBundle& l, int max_k) {
  WarmupReport r;
  r.ununs = ununs_level(l);
  if (r.ununs < 1) return r;
  const int g = arithmetic_genus(l.curve());
  r.expected_dimension_claimed = true;
  r.h0 = h0(l);
  r.expected_h0 = l.total_degree() - g + 1;
  r.h0_omega_minus_l = h0(tensor(dualizing_sheaf(l.curve_ptr()), inverse(l)));
  r.expected_dimension_ok = r.h0_omega_minus_l == 0 && static_cast<int>(r.h0) == r.expected_h0;
  const int k = std::min(r.ununs, max_k);
  if (k >= 2) r.spanned = spanned_probe(l, k - 1);
  return r;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::passed:
      return "PASS";
    case Status::failed:
      return "FAIL";
    case Status::partial:
      return "PARTIAL";
    case Status::not_applicable:
      return "N/A";
  }
  return "?";
}

VanishingVerdict verify_vanishing(const CoefficientBundle& e, const LinearSystem& w, int threshold_offset) {
  const BoundReport bounds = compute_bounds(w, &e);
  VanishingVerdict v;
  v.threshold = *bounds.t_threshold + threshold_offset;
  v.t_first = std::max(v.threshold, 0);
  for (int t = v.t_first; t <= bounds.m; ++t) {
    std::size_t d = 0;
    try {
      d = koszul_dim(t, 0, e, w);
    } catch (const SliceTooLarge&) {
      v.status = Status::partial;
      return v;
    }
    v.dims.emplace_back(t, d);
    v.t_last_checked = t;
    if (d != 0) {
      v.status = Status::failed;
      v.witness_t = t;
      v.witness_dim = d;
      return v;
    }
  }
  return v;
}

std::string to_string(NpStatus s) {
  switch (s) {
    case NpStatus::verified:
      return "verified";
    case NpStatus::not_very_ample:
      return "undefined: very-ampleness probe refuted";
    case NpStatus::h1_nonzero:
      return "undefined: h1(L) != 0";
    case NpStatus::no_degree_bound:
      return "undefined: no q-range makes higher Koszul groups vanish";
  }
  return "?";
}

NpReport verify_np_direct(const LineBundle& l, int p_max) {
  NpReport r;
  r.p_max = p_max;
  if (h1(l) != 0) {
    r.status = NpStatus::h1_nonzero;
    return r;
  }
  r.probe = spanned_probe(l, 2);
  if (r.probe->refuted) {
    r.status = NpStatus::not_very_ample;
    return r;
  }
  // Smallest s >= 1 with deg_Z omega - s deg_Z L < 0 on every component; then
  // H^0(omega (x) L^{-s'}) = 0 for s' >= s, so K_{i,q} = K_{m-2-i,2-q}(omega)^*
  // vanishes for q >= s + 2.
  const NodalCurve& x = l.curve();
  int s_min = 1;
  for (std::size_t c = 0; c < x.component_count(); ++c) {
    const int dw = omega_degree_on(x, c);
    const int dl = l.degree(c);
    if (dl <= 0) {
      if (dl < 0 || dw >= 0) {
        r.status = NpStatus::no_degree_bound;
        return r;
      }
      continue;
    }
    s_min = std::max(s_min, dw / dl + 1 > 0 ? dw / dl + 1 : 1);
  }
  r.degree_condition = s_min == 1 && std::all_of(l.degrees().begin(), l.degrees().end(), [](int d) { return d >= 1; });
  r.q_high = std::max(3, s_min + 1);

  const LinearSystem w = LinearSystem::complete(l);
  const LineBundle o = structure_sheaf(l.curve_ptr());
  r.largest_p = p_max;
  for (int i = 0; i <= p_max; ++i) {
    for (int q = r.q_low; q <= r.q_high; ++q) {
      std::size_t d = 0;
      try {
        d = koszul_dim(i, q, o, w);
      } catch (const SliceTooLarge&) {
        r.partial = true;
        r.largest_p = i - 1;
        return r;
      }
      r.table.push_back({i, q, d});
      if (d != 0) {
        r.largest_p = i - 1;
        return r;
      }
    }
  }
  return r;
}

HypothesisReport hypothesis_kununs_np(const LineBundle& l) {
  HypothesisReport r;
  r.k = ununs_level(l);
  if (r.k < 3) return r;
  r.tested = true;
  r.np = verify_np_direct(l, r.k - 3);
  return r;
}

}  // namespace nodalsyz
