// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include "opnb/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace opnb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Probe {
  double a;  // step length
  double f;  // phi(a), +inf when the objective was non-finite
  double d;  // phi'(a)
};

struct LineSearchEnv {
  const std::function<double(const Vector&, Vector&)>& fg;
  const Vector& x;
  const Vector& p;
  Vector xt;
  Vector gt;
  int evals = 0;

  Probe eval(double a) {
    xt = x + a * p;
    double f = fg(xt, gt);
    ++evals;
    if (!std::isfinite(f)) return {a, kInf, 0.0};
    return {a, f, gt.dot(p)};
  }
};

// N&W eq. 3.59; falls back to bisection when degenerate
double cubic_step(const Probe& lo, const Probe& hi) {
  const double d1 = lo.d + hi.d - 3.0 * (lo.f - hi.f) / (lo.a - hi.a);
  const double disc = d1 * d1 - lo.d * hi.d;
  if (disc >= 0.0 && std::isfinite(disc)) {
    const double d2 = (hi.a > lo.a ? 1.0 : -1.0) * std::sqrt(disc);
    const double denom = hi.d - lo.d + 2.0 * d2;
    if (denom != 0.0) {
      const double a = hi.a - (hi.a - lo.a) * (hi.d + d2 - d1) / denom;
      if (std::isfinite(a)) return a;
    }
  }
  return 0.5 * (lo.a + hi.a);
}

// strong-Wolfe zoom; returns acceptance, fills out
bool zoom(LineSearchEnv& env, Probe lo, Probe hi, double f0, double d0,
          double c1, double c2, Probe& out) {
  for (int it = 0; it < 30; ++it) {
    const double width = std::fabs(hi.a - lo.a);
    if (width < 1e-14 * std::max(1.0, std::fabs(lo.a))) break;
    double a = cubic_step(lo, hi);
    const double amin = std::min(lo.a, hi.a);
    const double amax = std::max(lo.a, hi.a);
    if (!(a > amin + 0.05 * width && a < amax - 0.05 * width)) {
      a = 0.5 * (lo.a + hi.a);
    }
    Probe pj = env.eval(a);
    if (pj.f > f0 + c1 * a * d0 || pj.f >= lo.f) {
      hi = pj;
    } else {
      if (std::fabs(pj.d) <= -c2 * d0) {
        out = pj;
        return true;
      }
      if (pj.d * (hi.a - lo.a) >= 0.0) hi = lo;
      lo = pj;
    }
  }
  // no point meeting both conditions; settle for plain decrease if found
  if (lo.a > 0.0 && lo.f < f0) {
    out = lo;
    return true;
  }
  return false;
}

bool wolfe_search(LineSearchEnv& env, double f0, double d0, double a_init,
                  double c1, double c2, Probe& out) {
  Probe prev{0.0, f0, d0};
  double a = a_init;
  for (int it = 0; it < 25; ++it) {
    Probe cur = env.eval(a);
    if (cur.f > f0 + c1 * a * d0 || (it > 0 && cur.f >= prev.f)) {
      return zoom(env, prev, cur, f0, d0, c1, c2, out);
    }
    if (std::fabs(cur.d) <= -c2 * d0) {
      out = cur;
      return true;
    }
    if (cur.d >= 0.0) {
      return zoom(env, cur, prev, f0, d0, c1, c2, out);
    }
    prev = cur;
    a = std::min(2.5 * a, 1e8);
  }
  return false;
}

}  // namespace

LbfgsResult lbfgs_minimize(
    const std::function<double(const Vector&, Vector&)>& fg, const Vector& x0,
    const LbfgsOptions& opts) {
  LbfgsResult res;
  res.x = x0;
  res.grad.resize(x0.size());
  res.f = fg(res.x, res.grad);
  if (!std::isfinite(res.f) || !res.grad.allFinite()) {
    fail(Errc::NonFiniteObjective, "objective not finite at the start point");
  }
  res.trace.push_back(res.f);

  std::deque<Vector> S, Y;
  std::deque<double> rho;
  Vector q(x0.size()), pdir(x0.size());

  for (int it = 0; it < opts.max_iterations; ++it) {
    if (res.grad.cwiseAbs().maxCoeff() <= opts.gradient_tolerance) {
      res.converged = true;
      break;
    }

    // two-loop recursion
    q = res.grad;
    std::vector<double> alpha(S.size());
    for (std::size_t j = S.size(); j-- > 0;) {
      alpha[j] = rho[j] * S[j].dot(q);
      q -= alpha[j] * Y[j];
    }
    if (!S.empty()) {
      const double gamma = S.back().dot(Y.back()) / Y.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t j = 0; j < S.size(); ++j) {
      const double beta = rho[j] * Y[j].dot(q);
      q += (alpha[j] - beta) * S[j];
    }
    pdir = -q;

    double d0 = res.grad.dot(pdir);
    if (!(d0 < 0.0)) {
      // curvature information went stale; restart from steepest descent
      S.clear();
      Y.clear();
      rho.clear();
      pdir = -res.grad;
      d0 = -res.grad.squaredNorm();
    }

    const double a_init =
        it == 0 ? 1.0 / std::max(1.0, res.grad.cwiseAbs().maxCoeff()) : 1.0;

    LineSearchEnv env{fg, res.x, pdir, Vector(), Vector(), 0};
    Probe acc{};
    if (!wolfe_search(env, res.f, d0, a_init, opts.c1, opts.c2, acc)) {
      res.line_search_failed = true;
      break;
    }

    const Vector x_new = res.x + acc.a * pdir;
    // gt in env corresponds to the last probe; re-evaluate only if the
    // accepted point is not the last one probed
    Vector g_new;
    double f_new;
    if (env.xt.size() == x_new.size() && (env.xt - x_new).cwiseAbs().maxCoeff() == 0.0) {
      g_new = env.gt;
      f_new = acc.f;
    } else {
      g_new.resize(x_new.size());
      f_new = fg(x_new, g_new);
    }
    if (!std::isfinite(f_new) || !g_new.allFinite()) {
      res.line_search_failed = true;
      break;
    }

    const Vector s = x_new - res.x;
    const Vector yv = g_new - res.grad;
    const double sy = s.dot(yv);
    if (sy > 1e-10 * s.norm() * yv.norm()) {
      S.push_back(s);
      Y.push_back(yv);
      rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > opts.memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }

    res.x = x_new;
    res.f = f_new;
    res.grad = g_new;
    res.trace.push_back(res.f);
    ++res.iterations;
  }
  if (!res.converged && !res.line_search_failed &&
      res.grad.cwiseAbs().maxCoeff() <= opts.gradient_tolerance) {
    res.converged = true;
  }
  return res;
}

}  // namespace opnb
