#pragma once

#include <stdexcept>
#include <string>

namespace greenlab {

// Adaptive quadrature gave up; carries the last estimate so callers can
// decide whether it is still usable.
class quadrature_error : public std::runtime_error {
 public:
  quadrature_error(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

class inversion_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class sampling_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested quantity is undefined for the given process parameters
// (e.g. whole-space Green function of a recurrent process).
class transience_error : public std::domain_error {
  using std::domain_error::domain_error;
};

// g_D^a degenerates (a = 0 across components); flagged rather than
// silently returning 0.
class degenerate_bound_error : public std::domain_error {
  using std::domain_error::domain_error;
};

class config_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace greenlab
