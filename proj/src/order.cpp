#include "fpplab/order.hpp"

#include <cmath>
#include <stdexcept>

namespace fpplab {

const char* regime_name(OrderRegime regime) {
  switch (regime) {
    case OrderRegime::kRZero:
      return "r=0";
    case OrderRegime::kBelowDm1:
      return "0<r<d-1";
    case OrderRegime::kAtDm1:
      return "r=d-1";
    case OrderRegime::kBetweenDm1D:
      return "d-1<r<d";
    case OrderRegime::kAtD:
      return "r=d";
    case OrderRegime::kAboveD:
      return "r>d";
  }
  return "?";
}

OrderRegime order_regime(int d, double r) {
  if (d < 2) throw std::invalid_argument("order_f: d must be >= 2");
  if (!(r >= 0.0)) throw std::invalid_argument("order_f: r must be >= 0");
  const double dm1 = static_cast<double>(d - 1);
  const double dd = static_cast<double>(d);
  if (r == 0.0) return OrderRegime::kRZero;
  if (r < dm1) return OrderRegime::kBelowDm1;
  if (r == dm1) return OrderRegime::kAtDm1;
  if (r < dd) return OrderRegime::kBetweenDm1D;
  if (r == dd) return OrderRegime::kAtD;
  return OrderRegime::kAboveD;
}

double order_f(int d, double r, double N) {
  OrderRegime regime = order_regime(d, r);
  if (!(N >= 16.0)) throw std::invalid_argument("order_f: N must be >= 16");
  const double lg = std::log(N);
  const double llg = std::log(lg);
  const double dd = static_cast<double>(d);
  switch (regime) {
    case OrderRegime::kRZero:
      return lg / llg;
    case OrderRegime::kBelowDm1:
      return std::pow(lg, 1.0 / (1.0 + r));
    case OrderRegime::kAtDm1:
      return std::pow(lg, 1.0 / dd) * std::pow(llg, (dd - 2.0) / dd);
    case OrderRegime::kBetweenDm1D:
      return std::pow(lg, 1.0 / dd);
    case OrderRegime::kAtD:
      return std::pow(lg, 1.0 / dd) * std::pow(llg, -1.0 / dd);
    case OrderRegime::kAboveD:
      return std::pow(lg, 1.0 / r);
  }
  throw std::logic_error("unreachable");
}

double ldp_exponent_g(double r, int d, double L, double k1) {
  if (d < 1) throw std::invalid_argument("ldp_exponent_g: d must be >= 1");
  if (!(r > 1.0)) throw std::invalid_argument("ldp_exponent_g: r must be > 1");
  if (!(L >= 2.0)) throw std::invalid_argument("ldp_exponent_g: L must be >= 2");
  if (!(k1 >= 1.0)) throw std::invalid_argument("ldp_exponent_g: k1 must be >= 1");
  const double dd = static_cast<double>(d);
  if (r < dd) return std::pow(L, r);
  if (r == dd) return std::pow(L, dd) / std::pow(std::log(L), dd - 1.0);
  if (r < dd + 1.0) return std::pow(L, dd);
  if (r == dd + 1.0) return std::pow(L, dd + 1.0) / k1;
  throw std::invalid_argument("ldp_exponent_g: r > d+1 is out of the proposition range");
}

}  // namespace fpplab
