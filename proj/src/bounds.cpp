#include "dioph/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "dioph/bigint.hpp"

namespace dioph {

namespace {

BoundValue rational(const mpq_class& q) {
  BoundValue v;
  v.exact = q;
  v.value = q.get_d();
  return v;
}

void need_lambdas(const std::vector<double>& ls, double lo, const char* what) {
  if (ls.empty()) throw PreconditionError(std::string(what) + ": at least one lambda is required");
  for (double l : ls)
    if (!(l >= lo))
      throw PreconditionError(std::string(what) + ": each lambda must satisfy lambda >= " +
                              std::to_string(int(lo)));
}

// sum of c / lambda_i, infinite lambdas contribute 0.
mpq_class inv_sum(const std::vector<double>& ls, long c) {
  mpq_class s = 0;
  for (double l : ls)
    if (std::isfinite(l)) s += mpq_class(c) / exact_of(l);
  return s;
}

mpq_class inv_max(const std::vector<double>& ls, long c) {
  double m = *std::max_element(ls.begin(), ls.end());
  return std::isinf(m) ? mpq_class(0) : mpq_class(c) / exact_of(m);
}

BoundValue two_sided(const mpq_class& lo, const mpq_class& hi, bool conjectural) {
  BoundValue v = rational(lo);
  v.exact_upper = hi;
  v.upper = hi.get_d();
  v.conjectural = conjectural;
  return v;
}

}  // namespace

mpq_class exact_of(double v) {
  if (!std::isfinite(v)) throw PreconditionError("finite value required");
  mpq_class q(v);
  q.canonicalize();
  return q;
}

BoundValue jarnik(double lambda) {
  need_lambdas({lambda}, 2, "jarnik");
  if (std::isinf(lambda)) return rational(0);
  return rational(mpq_class(2) / exact_of(lambda));
}

BoundValue vsets(double lambda) {
  need_lambdas({lambda}, 1, "vsets");
  if (std::isinf(lambda)) return rational(0);
  return rational(mpq_class(1) / exact_of(lambda));
}

BoundValue cantor_dim(unsigned base, const std::vector<unsigned>& W) {
  if (base < 3) throw PreconditionError("cantor: base must satisfy b >= 3");
  std::vector<unsigned> w = W;
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  if (w.empty()) throw PreconditionError("cantor: W must be nonempty");
  if (w.back() >= base) throw PreconditionError("cantor: W must be a subset of {0, ..., b-1}");
  BoundValue v;
  v.value = std::log(double(w.size())) / std::log(double(base));
  if (w.size() == 1) v.exact = 0;
  if (w.size() == base) v.exact = 1;
  return v;
}

BoundValue product_upper(const std::vector<double>& ls) {
  need_lambdas(ls, 2, "product-upper");
  return rational(mpq_class(long(ls.size()) - 1) + inv_max(ls, 2));
}

BoundValue product_lower(const std::vector<double>& ls) {
  need_lambdas(ls, 2, "product-lower");
  return rational(std::max(mpq_class(long(ls.size()) - 1), inv_sum(ls, 2)));
}

BoundValue vsets_product_upper(const std::vector<double>& ls) {
  need_lambdas(ls, 1, "vsets-product-upper");
  return rational(mpq_class(long(ls.size()) - 1) + inv_max(ls, 1));
}

BoundValue vsets_product_lower(const std::vector<double>& ls) {
  need_lambdas(ls, 1, "vsets-product-lower");
  return rational(std::max(mpq_class(long(ls.size()) - 1), inv_sum(ls, 1)));
}

BoundValue complement_bound(double lambda) {
  if (!(lambda > 1)) throw PreconditionError("complement: lambda must satisfy lambda > 1");
  if (std::isinf(lambda)) return rational(0);
  mpq_class l = exact_of(lambda);
  return rational(2 * (2 * l - 1) / (l * l - l));
}

BoundValue happ_bound(const std::vector<double>& ls, std::size_t i) {
  need_lambdas(ls, 2, "happ-bound");
  if (i >= ls.size()) throw PreconditionError("happ-bound: index outside 0..n-1");
  BoundValue v;
  if (std::any_of(ls.begin(), ls.end(), [](double l) { return std::isinf(l); })) {
    v.value = INFINITY;
    return v;
  }
  mpq_class prod = 1;
  for (double l : ls) prod *= exact_of(l);
  return rational(prod / (exact_of(ls[i]) - 1) + 1);
}

BoundValue modif(double lambda0, double lambda1) {
  need_lambdas({lambda0, lambda1}, 1, "modif");
  if (std::isinf(lambda0) || std::isinf(lambda1)) {
    BoundValue v;
    v.value = std::isinf(lambda0) ? (std::isinf(lambda1) ? INFINITY : lambda1 - 1) : lambda0;
    return v;
  }
  mpq_class a = exact_of(lambda0), b = exact_of(lambda1);
  return rational(a * (b - 1) / (a + b - 1));
}

BoundValue modif2(double lambda1) {
  need_lambdas({lambda1}, 1, "modif2");
  if (std::isinf(lambda1)) {
    BoundValue v;
    v.value = INFINITY;
    return v;
  }
  mpq_class b = exact_of(lambda1);
  return rational((b * b - b) / (2 * b - 1));
}

BoundValue product_conjectural(const std::vector<double>& ls) {
  need_lambdas(ls, 2, "holdja");
  const mpq_class n1(long(ls.size()) - 1);
  return two_sided(std::max(n1, inv_sum(ls, 2)), n1 + inv_max(ls, 2), true);
}

BoundValue sum_threshold_value() {
  BoundValue v;
  v.value = (5.0 + std::sqrt(17.0)) / 2.0;
  return v;
}

std::vector<std::string> bound_query_names() {
  return {"jarnik",       "vsets",         "cantor",     "product-upper",       "product-lower",
          "vsets-upper",  "vsets-lower",   "complement", "happ-bound",          "modif",
          "modif2",       "holdja",        "threshold"};
}

BoundValue evaluate_bound(const BoundQuery& q) {
  auto one = [&]() {
    if (q.lambdas.size() != 1) throw PreconditionError(q.name + ": exactly one lambda expected");
    return q.lambdas[0];
  };
  if (q.name == "jarnik") return jarnik(one());
  if (q.name == "vsets") return vsets(one());
  if (q.name == "cantor") return cantor_dim(q.base, q.digits);
  if (q.name == "product-upper") return product_upper(q.lambdas);
  if (q.name == "product-lower") return product_lower(q.lambdas);
  if (q.name == "vsets-upper") return vsets_product_upper(q.lambdas);
  if (q.name == "vsets-lower") return vsets_product_lower(q.lambdas);
  if (q.name == "complement") {
    need_lambdas(q.lambdas, 1, "complement");
    return complement_bound(*std::min_element(q.lambdas.begin(), q.lambdas.end()));
  }
  if (q.name == "happ-bound") return happ_bound(q.lambdas, q.index);
  if (q.name == "modif") {
    if (q.lambdas.size() != 2) throw PreconditionError("modif: two lambdas expected");
    return modif(q.lambdas[0], q.lambdas[1]);
  }
  if (q.name == "modif2") {
    if (q.lambdas.empty() || q.lambdas.size() > 2) throw PreconditionError("modif2: lambda_1 expected");
    return modif2(q.lambdas.back());
  }
  if (q.name == "holdja") return product_conjectural(q.lambdas);
  if (q.name == "threshold") return sum_threshold_value();
  throw PreconditionError("unknown formula query '" + q.name + "'");
}

std::string format_bound(const BoundQuery& q, const BoundValue& v) {
  std::ostringstream s;
  s << std::setprecision(17);
  s << q.name << ' ';
  if (v.upper) s << "lower=";
  s << v.value;
  if (v.exact) s << " exact=" << v.exact->get_str();
  if (v.upper) {
    s << " upper=" << *v.upper;
    if (v.exact_upper) s << " exact_upper=" << v.exact_upper->get_str();
  }
  if (v.conjectural) s << " conjectural";
  s << '\n';
  return s.str();
}

}  // namespace dioph
