#ifndef AVI_LINE_SEARCH_HPP
#define AVI_LINE_SEARCH_HPP

#include <cmath>
#include <sstream>
#include <utility>

#include "avi/types.hpp"

namespace avi {

template <typename Scalar, typename Candidate>
struct LineSearchResult {
  Scalar L;
  int trials;  // i_k, the index of the accepted trial
  Candidate candidate;
};

/// Smallest positive L the search will try.
template <typename Scalar>
constexpr Scalar kMinStepConstant = Scalar(1e-300);

/// Tries L = 2^(i-1) * L_prev for i = 0, 1, ..., rebuilding the candidate with
/// `build(L)` every time, and returns the first one for which
/// `accept(L, candidate)` holds. Throws LineSearchError after `cap` trials.
template <typename Scalar, typename Build, typename Accept>
auto line_search(Scalar L_prev, Build&& build, Accept&& accept, int cap)
    -> LineSearchResult<Scalar, decltype(build(L_prev))> {
  detail::require(L_prev > Scalar(0), "line_search: previous L must be positive");
  detail::require(cap >= 1, "line_search: cap must be >= 1");
  for (int i = 0; i < cap; ++i) {
    const Scalar L = std::max(std::ldexp(L_prev, i - 1), kMinStepConstant<Scalar>);
    auto candidate = build(L);
    if (accept(L, candidate)) return {L, i, std::move(candidate)};
  }
  std::ostringstream msg;
  msg << "line search exceeded " << cap << " trials starting from L = " << L_prev
      << " (last trial L = " << std::ldexp(L_prev, cap - 2)
      << "); the operator may violate the assumed smoothness or mu may be too large";
  throw LineSearchError(msg.str());
}

}  // namespace avi

#endif  // AVI_LINE_SEARCH_HPP
