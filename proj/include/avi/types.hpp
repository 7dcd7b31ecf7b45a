#ifndef AVI_TYPES_HPP
#define AVI_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace avi {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Thrown when the backtracking search exhausts its trial budget.
class LineSearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

template <typename Scalar>
void require_same_dim(const Vector<Scalar>& a, const Vector<Scalar>& b, const char* where) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace detail
}  // namespace avi

#endif  // AVI_TYPES_HPP
