#include "dioph/boxdim.hpp"

#include <cmath>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>

#include "dioph/verify.hpp"
#include "parallel.hpp"

namespace dioph {

BigInt count_cantor(unsigned base, const std::vector<unsigned>& W, std::size_t m, bool product) {
  if (base < 3) throw PreconditionError("box counting needs b >= 3");
  if (W.empty()) throw PreconditionError("digit set W must be nonempty");
  for (unsigned d : W)
    if (d >= base) throw PreconditionError("W digit outside [0, base-1]");
  if (m < 1) throw PreconditionError("depth m must be >= 1");
  std::set<unsigned> distinct(W.begin(), W.end());
  return pow_int(distinct.size(), product ? 2 * m : m);
}

GridCount cantor_grid(unsigned base, const std::vector<unsigned>& W, const std::vector<std::size_t>& depths,
                      bool product) {
  GridCount g;
  g.base = base;
  g.ambient_dim = product ? 2 : 1;
  g.depths = depths;
  for (std::size_t m : depths) g.counts.push_back(count_cantor(base, W, m, product));
  return g;
}

double estimate_dim(const GridCount& g) {
  if (g.depths.size() < 3 || g.counts.size() != g.depths.size())
    throw PreconditionError("estimate_dim needs at least 3 depths");
  bool constant = true;
  for (const auto& c : g.counts) {
    if (c <= 0) throw PreconditionError("box counts must be positive");
    constant = constant && c == g.counts.front();
  }
  if (constant) throw PreconditionError("degenerate grid: counts are constant in m");
  const long double lb = std::log((long double)g.base);
  const std::size_t k = g.depths.size();
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const long double x = g.depths[i] * lb, y = log_abs(g.counts[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const long double den = k * sxx - sx * sx;
  if (den == 0) throw PreconditionError("degenerate grid: repeated depths");
  return double((k * sxy - sx * sy) / den);
}

GridCount count_sampled(const std::vector<std::vector<DigitExpansion>>& points, unsigned base,
                        const std::vector<std::size_t>& depths) {
  if (points.empty()) throw PreconditionError("no points to count");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw PreconditionError("points need at least one coordinate");
  std::size_t need = 0;
  for (std::size_t m : depths) need = std::max(need, m);
  for (const auto& p : points) {
    if (p.size() != dim) throw PreconditionError("points differ in dimension");
    for (const auto& x : p) {
      if (x.base() != base) throw PreconditionError("point base differs from --base");
      if (x.frac_len() < need)
        throw PreconditionError("insufficient digits: need " + std::to_string(need) + ", have " +
                                std::to_string(x.frac_len()));
    }
  }
  GridCount g;
  g.base = base;
  g.ambient_dim = unsigned(dim);
  g.depths = depths;
  g.sampled = true;
  g.counts.resize(depths.size());
  detail::parallel_for(depths.size(), thread_cap(), [&](std::size_t i) {
    const std::size_t m = depths[i];
    std::unordered_set<std::string> boxes;
    for (const auto& p : points) {
      std::string key;
      for (const auto& x : p) {
        key += x.sign() < 0 ? '-' : '+';
        key += x.int_part().get_str();
        key += ':';
        key.append(reinterpret_cast<const char*>(x.digits().data()), m);
        key += '|';
      }
      boxes.insert(std::move(key));
    }
    g.counts[i] = BigInt(static_cast<unsigned long>(boxes.size()));
  });
  return g;
}

std::vector<std::size_t> parse_depths(const std::string& text) {
  auto num = [&](const std::string& t) -> std::size_t {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != t.size()) throw PreconditionError("bad depth list '" + text + "'");
    return v;
  };
  std::vector<std::size_t> out;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::size_t a = num(text.substr(0, colon)), b = num(text.substr(colon + 1));
    if (a < 1 || b < a) throw PreconditionError("depth range must satisfy 1 <= a <= b");
    for (std::size_t m = a; m <= b; ++m) out.push_back(m);
  } else {
    std::stringstream ss(text);
    std::string t;
    while (std::getline(ss, t, ','))
      if (!t.empty()) out.push_back(num(t));
  }
  if (out.empty()) throw PreconditionError("empty depth list");
  return out;
}

void write_grid(std::ostream& out, const GridCount& g, std::optional<double> reference) {
  if (g.sampled) out << "# sampled point cloud: no dimension inference\n";
  for (std::size_t i = 0; i < g.depths.size(); ++i) out << g.depths[i] << ' ' << g.counts[i].get_str() << '\n';
  if (!g.sampled && g.depths.size() >= 3) {
    std::ostringstream s;
    s.precision(12);
    s << "slope=" << estimate_dim(g);
    if (reference) s << " reference=" << *reference;
    out << s.str() << '\n';
  }
}

}  // namespace dioph
