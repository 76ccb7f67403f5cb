// Adaptive Gauss-Kronrod quadrature, (G7,K15) pair, complex-valued integrands.

#include "primevar/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace primevar::quadrature {

namespace {

// K15 nodes on [0,1] (positive half; symmetric) and weights; G7 weights on the
// shared nodes (odd Kronrod indices).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  std::complex<double> val;
  double err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel eval_panel(const std::function<std::complex<double>(double)>& f,
                 double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::complex<double> fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);

  std::complex<double> resk = kWgk[7] * fv[7];
  std::complex<double> resg = kWg[3] * fv[7];
  double resabs = kWgk[7] * std::abs(fv[7]);
  for (int i = 0; i < 7; ++i) {
    resk += kWgk[i] * (fv[i] + fv[14 - i]);
    resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    if (i % 2 == 1) resg += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.val = h * resk;
  double diff = std::abs(h * (resk - resg));
  // Standard QUADPACK-style error sharpening.
  double scale = h * resabs;
  p.err = (scale > 0.0 && diff > 0.0)
              ? std::min(diff, scale * std::pow(200.0 * diff / scale, 1.5))
              : diff;
  if (!std::isfinite(p.err)) p.err = diff;
  return p;
}

}  // namespace

Result adaptive_gk(const std::function<std::complex<double>(double)>& f,
                   double a, double b, double rel_tol, double abs_tol,
                   int max_panels, const std::vector<double>& breakpoints) {
  Result out;
  if (a == b) {
    out.converged = true;
    return out;
  }

  std::vector<double> cuts{a, b};
  for (double t : breakpoints)
    if (t > std::min(a, b) && t < std::max(a, b)) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<Panel> heap;
  std::complex<double> total{0.0, 0.0};
  double err_total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = eval_panel(f, cuts[i], cuts[i + 1]);
    total += p.val;
    err_total += p.err;
    heap.push(p);
  }

  int n = static_cast<int>(heap.size());
  while (n < max_panels) {
    double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (err_total <= tol) break;
    Panel worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval exhausted at machine precision; accept its estimate
      heap.push(Panel{worst.a, worst.b, worst.val, 0.0});
      err_total -= worst.err;
      continue;
    }
    Panel l = eval_panel(f, worst.a, mid);
    Panel r = eval_panel(f, mid, worst.b);
    total += l.val + r.val - worst.val;
    err_total += l.err + r.err - worst.err;
    heap.push(l);
    heap.push(r);
    ++n;
  }

  out.value = total;
  out.error = err_total;
  out.intervals = n;
  out.converged = err_total <= std::max(abs_tol, rel_tol * std::abs(total));
  return out;
}

}  // namespace primevar::quadrature
