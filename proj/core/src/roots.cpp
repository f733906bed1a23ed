#include "demix/roots.hpp"

#include <cmath>
#include <sstream>

#include "demix/error.hpp"

namespace demix {

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw DomainError("bisect: require lo <= hi");
  double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    std::ostringstream msg;
    msg << "bisect: no sign change on [" << lo << ", " << hi << "] (f = " << flo << ", " << fhi
        << ")";
    throw NumericalError(msg.str());
  }
  // 200 halvings exhaust double precision on any finite bracket.
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Extremum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                            double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 300 && b - a > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  Extremum best{c, fc};
  if (fd > best.value) best = {d, fd};
  for (double endpoint : {lo, hi}) {
    const double fe = f(endpoint);
    if (fe > best.value) best = {endpoint, fe};
  }
  return best;
}

}  // namespace demix
