#include "orbitlab/fields.hpp"

#include <cmath>

#include "orbitlab/errors.hpp"

namespace orbitlab {

Vec differential(const ChartMap& map, const Vec& at, const Vec& dir, DiffMode mode,
                 double fd_step, int fd_order) {
  if (mode == DiffMode::Analytic && map.jacobian) return map.jacobian(at) * dir;
  const double scale = dir.norm();
  if (scale == 0.0) return Vec::Zero(map.eval(at).size());
  const Vec u = dir / scale;
  const double h = fd_scaled_step(at.norm(), fd_step);
  const Vec central =
      (map.eval(at + h * u) - map.eval(at - h * u)) * (scale / (2.0 * h));
  if (fd_order <= 2) return central;
  const Vec wide =
      (map.eval(at + 2.0 * h * u) - map.eval(at - 2.0 * h * u)) * (scale / (4.0 * h));
  return (4.0 * central - wide) / 3.0;
}

namespace {

// Chart representation of L_g from the tangent space at `base` to the
// tangent space at g*base. In left-trivialized coordinates this is the
// identity map regardless of the base.
ChartMap left_translation_map(const GroupElement& g, const GroupElement& base) {
  ChartMap map;
  const GroupElement target = multiply(g, base);
  map.eval = [g, base, target](const Vec& c) {
    return chart_coords(multiply(g, chart_point(c, base)), target);
  };
  map.jacobian = [g](const Vec&) {
    return Mat::Identity(g.group->group_dim, g.group->group_dim);
  };
  return map;
}

// Chart representation of R_g from the tangent space at `base` to the one
// at base*g; analytically Ad_{g^-1}, independent of the base.
ChartMap right_translation_map(const GroupElement& g, const GroupElement& base) {
  ChartMap map;
  const GroupElement target = multiply(base, g);
  map.eval = [g, base, target](const Vec& c) {
    return chart_coords(multiply(chart_point(c, base), g), target);
  };
  map.jacobian = [g](const Vec&) { return adjoint_matrix(inverse(g)); };
  return map;
}

}  // namespace

GroupTangent field_at(const InvariantField& f, const GroupElement& g, DiffMode mode,
                      double fd_step) {
  if (!f.seed.group->same_group_as(*g.group))
    throw UsageError("field_at: field and element from different groups");
  const GroupElement e = identity_element(g.group);
  const ChartMap map = (f.side == FieldSide::Left) ? left_translation_map(g, e)
                                                   : right_translation_map(g, e);
  const Vec at = Vec::Zero(g.group->group_dim);
  return GroupTangent{g, differential(map, at, f.seed.coords, mode, fd_step)};
}

InvariantField conjugate_field(const InvariantField& f, const GroupElement& g) {
  const Mat conj_seed = g.matrix * f.seed.matrix * g.matrix.inverse();
  return InvariantField{algebra_from_matrix(f.seed.group, conj_seed), f.side};
}

TangentVec transport(const ActionSpec& spec, const InvariantField& f, const Point& x,
                     const GroupElement& g, DiffMode mode, double fd_step) {
  const GroupTangent vg = field_at(f, g, mode, fd_step);
  ChartMap psi;
  psi.eval = [&spec, &x, &g](const Vec& c) {
    return act(spec, chart_point(c, g), x).coords;
  };
  if (spec.jac_g) {
    psi.jacobian = [&spec, &x, &g](const Vec&) { return spec.jac_g(g, x.coords); };
  }
  const Vec at = Vec::Zero(g.group->group_dim);
  Vec components = differential(psi, at, vg.coords, mode, fd_step);
  return TangentVec{act(spec, g, x), std::move(components)};
}

TangentVec infinitesimal(const ActionSpec& spec, const AlgebraVector& v, const Point& y,
                         DiffMode mode, double fd_step) {
  if (mode == DiffMode::Analytic && spec.jac_g) {
    const GroupElement e = identity_element(spec.group);
    return TangentVec{y, spec.jac_g(e, y.coords) * v.coords};
  }
  const double h = fd_scaled_step(y.coords.norm(), fd_step);
  const Vec plus = act(spec, group_exp(v, h), y).coords;
  const Vec minus = act(spec, group_exp(v, -h), y).coords;
  return TangentVec{y, (plus - minus) / (2.0 * h)};
}

std::vector<CheckResult> identity_residuals(const ActionSpec& spec,
                                            const FieldSampleConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const GroupPtr group = spec.group;
  const DiffMode mode = cfg.mode;
  const double tol = cfg.tolerance;

  double r_eq4_left = 0, r_eq4_right = 0, r_prop22 = 0, r_eq6 = 0, r_lemma23 = 0;
  double r_eq10 = 0, r_eq11 = 0, r_thm212a = 0, r_thm212b = 0, r_curve = 0, r_linear = 0;

  for (int t = 0; t < cfg.trials; ++t) {
    const GroupElement g = random_element(group, rng);
    const GroupElement h = random_element(group, rng);
    const GroupElement k = random_element(group, rng);
    const Point x = make_point(spec, spec.sample_point(rng));
    const AlgebraVector v = random_algebra(group, rng);
    const InvariantField left{v, FieldSide::Left};
    const InvariantField right{v, FieldSide::Right};

    // v_L|_g = dC_g(v_R|_g) and v_R|_g = dC_{g^-1}(v_L|_g); C_g fixes g so
    // its differential maps the tangent space at g to itself.
    ChartMap conj_g;
    conj_g.eval = [&g](const Vec& c) {
      return chart_coords(translate(g, chart_point(c, g), TranslationSide::Conjugate), g);
    };
    conj_g.jacobian = [&g](const Vec&) { return adjoint_matrix(g); };
    const GroupElement ginv = inverse(g);
    ChartMap conj_ginv;
    conj_ginv.eval = [&ginv, &g](const Vec& c) {
      return chart_coords(translate(ginv, chart_point(c, g), TranslationSide::Conjugate),
                          g);
    };
    conj_ginv.jacobian = [&ginv](const Vec&) { return adjoint_matrix(ginv); };

    const Vec zero = Vec::Zero(group->group_dim);
    const Vec vl = field_at(left, g, mode, cfg.fd_step).coords;
    const Vec vr = field_at(right, g, mode, cfg.fd_step).coords;
    // C_g fixes g but not the chart rays through it, so the conjugation
    // chart maps are only differentiated at the origin.
    r_eq4_left =
        std::max(r_eq4_left, (vl - differential(conj_g, zero, vr, mode, cfg.fd_step, cfg.fd_order)).norm());
    r_eq4_right = std::max(
        r_eq4_right, (vr - differential(conj_ginv, zero, vl, mode, cfg.fd_step, cfg.fd_order)).norm());

    // dC_g of a right-invariant field stays right-invariant.
    const InvariantField w = conjugate_field(right, g);
    const Vec w_k = field_at(w, k, mode, cfg.fd_step).coords;
    const Vec w_kh = field_at(w, multiply(k, h), mode, cfg.fd_step).coords;
    // dR_h maps T_k G to T_kh G; both sides expressed at kh.
    const Vec pushed =
        differential(right_translation_map(h, k), zero, w_k, mode, cfg.fd_step, cfg.fd_order);
    r_prop22 = std::max(r_prop22, (pushed - w_kh).norm());

    // Transported right field against the direct generator value at g.x.
    const TangentVec tr = transport(spec, right, x, g, mode, cfg.fd_step);
    const TangentVec gen = infinitesimal(spec, v, tr.base, mode, cfg.fd_step);
    r_eq6 = std::max(r_eq6, (tr.components - gen.components).norm());

    // Base-point independence of the transported right field.
    const Point y = act(spec, g, x);
    const TangentVec via_y = transport(spec, right, y, h, mode, cfg.fd_step);
    const TangentVec via_x = transport(spec, right, x, multiply(h, g), mode, cfg.fd_step);
    r_lemma23 = std::max(r_lemma23, (via_y.components - via_x.components).norm());

    // Conjugate of the right field evaluated at g matches the left field.
    const Vec conj_at_g = field_at(conjugate_field(right, g), g, mode, cfg.fd_step).coords;
    r_eq10 = std::max(r_eq10, (conj_at_g - vl).norm());

    // G-invariance of the left-transported field.
    ChartMap phi_g;
    phi_g.eval = [&spec, &g](const Vec& p) { return spec.act_fn(g, p); };
    if (spec.jac_x) {
      phi_g.jacobian = [&spec, &g](const Vec& p) { return spec.jac_x(g, p); };
    }
    const TangentVec at_x = transport(spec, left, x, identity_element(group), mode,
                                      cfg.fd_step);
    const TangentVec at_gx = transport(spec, left, x, g, mode, cfg.fd_step);
    const Vec pushed_x =
        differential(phi_g, x.coords, at_x.components, mode, cfg.fd_step, cfg.fd_order);
    r_eq11 = std::max(r_eq11, (at_gx.components - pushed_x).norm());

    // Base-point change equals conjugation of the field.
    const GroupElement hg = multiply(h, g);
    const TangentVec lhs_a = transport(spec, left, x, hg, mode, cfg.fd_step);
    const TangentVec rhs_a =
        transport(spec, conjugate_field(left, g), y, h, mode, cfg.fd_step);
    r_thm212a = std::max(r_thm212a, (lhs_a.components - rhs_a.components).norm());

    const TangentVec lhs_b = transport(spec, left, y, h, mode, cfg.fd_step);
    const TangentVec rhs_b =
        transport(spec, conjugate_field(left, ginv), x, hg, mode, cfg.fd_step);
    r_thm212b = std::max(r_thm212b, (lhs_b.components - rhs_b.components).norm());

    // Field values against one-parameter curve derivatives.
    const double dc = fd_scaled_step(0.0, cfg.fd_step);
    const GroupElement gp = multiply(g, group_exp(v, dc));
    const GroupElement gm = multiply(g, group_exp(v, -dc));
    const Vec curve_left = (chart_coords(gp, g) - chart_coords(gm, g)) / (2.0 * dc);
    r_curve = std::max(r_curve, (vl - curve_left).norm());
    const Vec curve_right = (chart_coords(multiply(group_exp(v, dc), g), g) -
                             chart_coords(multiply(group_exp(v, -dc), g), g)) /
                            (2.0 * dc);
    r_curve = std::max(r_curve, (vr - curve_right).norm());

    // Linearity of the differential operator.
    ChartMap psi_x;
    psi_x.eval = [&spec, &x, &g](const Vec& c) {
      return act(spec, chart_point(c, g), x).coords;
    };
    const Vec u1 = random_algebra(group, rng).coords;
    const Vec u2 = random_algebra(group, rng).coords;
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    const Vec lin_lhs = differential(psi_x, zero, a * u1 + b * u2, mode, cfg.fd_step, cfg.fd_order);
    const Vec lin_rhs = a * differential(psi_x, zero, u1, mode, cfg.fd_step, cfg.fd_order) +
                        b * differential(psi_x, zero, u2, mode, cfg.fd_step, cfg.fd_order);
    r_linear = std::max(r_linear, (lin_lhs - lin_rhs).norm());
  }

  const int n = cfg.trials;
  std::vector<CheckResult> out;
  out.push_back(make_check("left field from conjugated right field", "Eq (4)", n,
                           r_eq4_left, tol));
  out.push_back(make_check("right field from inverse-conjugated left field", "Eq (4)", n,
                           r_eq4_right, tol));
  out.push_back(
      make_check("conjugated right field stays right-invariant", "Prop 2.2", n, r_prop22, tol));
  out.push_back(
      make_check("transported right field matches generator", "Eq (6)", n, r_eq6, tol));
  out.push_back(make_check("transported right field is base-point independent", "Lemma 2.3",
                           n, r_lemma23, tol));
  out.push_back(
      make_check("conjugate field at g equals left field", "Eq (10)", n, r_eq10, tol));
  out.push_back(
      make_check("left-transported field is G-invariant", "Eq (11)", n, r_eq11, tol));
  out.push_back(make_check("base-point change equals conjugation (first form)",
                           "Thm 2.12(ii)", n, r_thm212a, tol));
  out.push_back(make_check("base-point change equals conjugation (second form)",
                           "Thm 2.12(ii)", n, r_thm212b, tol));
  out.push_back(make_check("field values match one-parameter curves", "Eq (3)", n, r_curve,
                           std::max(tol, 1e-6)));
  out.push_back(make_check("differential is linear in the direction",
                           "invented — artifact plumbing", n, r_linear, std::max(tol, 1e-6)));
  return out;
}

namespace {

Point rk4_manifold_flow(const ActionSpec& spec, const AlgebraVector& v, Point y0,
                        double t_end, double dt, DiffMode mode) {
  const auto field = [&](const Vec& p) -> Vec {
    return infinitesimal(spec, v, Point{p, y0.domain_id}, mode).components;
  };
  double t = 0.0;
  Vec y = y0.coords;
  const double dir = (t_end >= 0.0) ? 1.0 : -1.0;
  while (std::abs(t_end - t) > 1e-15 * (1.0 + std::abs(t_end))) {
    const double step = dir * std::min(dt, std::abs(t_end - t));
    try {
      const Vec k1 = field(y);
      const Vec k2 = field(y + 0.5 * step * k1);
      const Vec k3 = field(y + 0.5 * step * k2);
      const Vec k4 = field(y + step * k3);
      y += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const DomainError&) {
      throw DomainError(spec.name + ": flow left the domain", t);
    }
    t += step;
    if (!spec.domain_predicate(y))
      throw DomainError(spec.name + ": flow left the domain", t);
  }
  return Point{y, y0.domain_id};
}

GroupElement rk4_group_flow(const GroupPtr& group, const Mat& seed, const GroupElement& g0,
                            double t_end, double dt) {
  // Left-invariant field in ambient matrix coordinates: Y' = Y V.
  double t = 0.0;
  Mat y = g0.matrix;
  const double dir = (t_end >= 0.0) ? 1.0 : -1.0;
  while (std::abs(t_end - t) > 1e-15 * (1.0 + std::abs(t_end))) {
    const double step = dir * std::min(dt, std::abs(t_end - t));
    const Mat k1 = y * seed;
    const Mat k2 = (y + 0.5 * step * k1) * seed;
    const Mat k3 = (y + 0.5 * step * k2) * seed;
    const Mat k4 = (y + step * k3) * seed;
    y += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += step;
  }
  return make_element(group, y);
}

}  // namespace

Point flow_integrate(const ActionSpec& spec, const InvariantField& f, const Point& x,
                     const GroupElement& g, double t_end, double dt, DiffMode mode) {
  if (!(dt > 0.0)) throw UsageError("flow_integrate: dt must be positive");
  if (!std::isfinite(t_end)) throw UsageError("flow_integrate: non-finite t_end");
  const Point start = act(spec, g, x);
  if (t_end == 0.0) return start;
  if (f.side == FieldSide::Right) {
    return rk4_manifold_flow(spec, f.seed, start, t_end, dt, mode);
  }
  const GroupElement g_end = rk4_group_flow(spec.group, f.seed.matrix, g, t_end, dt);
  return act(spec, g_end, x);
}

}  // namespace orbitlab
