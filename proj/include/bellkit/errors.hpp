#pragma once

#include <stdexcept>

namespace bellkit {

// Structurally invalid caller data: bad probability vectors, non-Hermitian
// inputs, filter parameters out of range, malformed grid steps.
class input_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A computation left its mathematical domain: correlation vector outside the
// positivity tetrahedron, eigenvalue below the PSD tolerance, vanishing trace.
class domain_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// An otherwise valid computation lost numerical meaning (failed iteration,
// complex eigenvalues where real ones were expected).
class numerical_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace bellkit
