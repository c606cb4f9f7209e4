#include "rexinfer/select.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "rexinfer/error.h"

namespace rexinfer {

namespace {

// log2 C(n, k) as a sum over the smaller of k and n - k factors.
double log2_binomial(const BigInt& n, std::size_t k) {
  BigInt rest = n - k;
  std::size_t terms = rest < k ? rest.convert_to<std::size_t>() : k;
  double nd = n.convert_to<double>();
  double sum = 0;
  for (std::size_t j = 0; j < terms; ++j)
    sum += std::log2((nd - static_cast<double>(j)) / static_cast<double>(j + 1));
  return sum;
}

}  // namespace

Measure parse_measure(const std::string& name) {
  if (name == "size") return Measure::kSize;
  if (name == "mdl") return Measure::kMdl;
  throw InputError("unknown measure '" + name + "' (expected size or mdl)");
}

std::string measure_name(Measure m) { return m == Measure::kSize ? "size" : "mdl"; }

std::size_t counting_bound(const Regex& r) { return 2 * stats(r).occ + 1; }

BigInt language_size(const Regex& r) {
  if (!is_deterministic(r)) throw PreconditionError("language_size needs a deterministic expression");
  BigInt total = 0;
  for (const auto& c : count_words(r, counting_bound(r))) total += c;
  return total;
}

double mdl_data_cost(const Regex& r, const Sample& s) {
  const std::size_t n = counting_bound(r);
  std::map<std::size_t, std::size_t> by_length;
  for (const auto& [w, m] : s.words())
    if (w.size() <= n) ++by_length[w.size()];
  if (by_length.empty()) return 0.0;
  auto counts = count_words(r, n);
  double data = 0;
  for (const auto& [i, k] : by_length) {
    if (counts[i] < k)
      throw PreconditionError("mdl_cost: " + std::to_string(k) + " sample words of length " + std::to_string(i) +
                              " but the expression has only " + counts[i].str());
    if (i > 0) data += 2 * std::log2(static_cast<double>(i));
    data += log2_binomial(counts[i], k);
  }
  return data;
}

double mdl_cost(const Regex& r, const Sample& s) {
  return mdl_data_cost(r, s) + static_cast<double>(stats(r).length);
}

Candidate make_candidate(const Regex& r, const Sample& s) {
  Candidate c;
  c.expr = r;
  auto st = stats(r);
  c.k = st.k;
  c.expr_length = st.length;
  c.language_size = language_size(r);
  c.mdl_cost = mdl_cost(r, s);
  return c;
}

const Candidate& best(const std::vector<Candidate>& candidates, Measure m) {
  if (candidates.empty()) throw PreconditionError("best needs at least one candidate");
  auto better = [m](const Candidate& a, const Candidate& b) {
    if (m == Measure::kSize) {
      if (a.language_size != b.language_size) return a.language_size < b.language_size;
    } else if (a.mdl_cost != b.mdl_cost) {
      return a.mdl_cost < b.mdl_cost;
    }
    if (a.expr_length != b.expr_length) return a.expr_length < b.expr_length;
    return render(a.expr) < render(b.expr);
  };
  return *std::min_element(candidates.begin(), candidates.end(), better);
}

}  // namespace rexinfer
