#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace dioph {

// Closed-form value; `exact` is set when the value is rational in the inputs.
struct BoundValue {
  double value = 0;
  std::optional<mpq_class> exact;
  // Two-sided answers (conjectural product bounds) carry the upper end here.
  std::optional<double> upper;
  std::optional<mpq_class> exact_upper;
  bool conjectural = false;
};

// Exact rational for a finite double.
mpq_class exact_of(double v);

BoundValue jarnik(double lambda);                       // 2/lambda, lambda >= 2
BoundValue vsets(double lambda);                        // 1/lambda, lambda >= 1
BoundValue cantor_dim(unsigned base, const std::vector<unsigned>& W);  // log|W|/log b
BoundValue product_upper(const std::vector<double>& lambdas);    // n-1 + 2/max
BoundValue product_lower(const std::vector<double>& lambdas);    // max{n-1, 2 sum 1/l}
BoundValue vsets_product_upper(const std::vector<double>& lambdas);  // n-1 + 1/max
BoundValue vsets_product_lower(const std::vector<double>& lambdas);  // max{n-1, sum 1/l}
BoundValue complement_bound(double lambda);             // 2(2l-1)/(l^2-l)
BoundValue happ_bound(const std::vector<double>& lambdas, std::size_t i);  // Lambda/(l_i-1)+1
BoundValue modif(double lambda0, double lambda1);       // l0(l1-1)/(l0+l1-1)
BoundValue modif2(double lambda1);                      // (l1^2-l1)/(2 l1-1)
BoundValue product_conjectural(const std::vector<double>& lambdas);
BoundValue sum_threshold_value();                       // (5+sqrt17)/2

struct BoundQuery {
  std::string name;
  std::vector<double> lambdas;
  unsigned base = 3;
  std::vector<unsigned> digits;
  std::size_t index = 0;
};

// Dispatch by query name; throws PreconditionError for unknown names or out-of-domain input.
BoundValue evaluate_bound(const BoundQuery& q);
std::vector<std::string> bound_query_names();
std::string format_bound(const BoundQuery& q, const BoundValue& v);

}  // namespace dioph
