#pragma once
// Shared value types and the error hierarchy for the truncated conformal-flow
// laboratory. Everything here is a plain value: immutable after construction,
// safe to copy between threads.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace confflow {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
// Raised when a truncation is too small to hold the result of e^{sD}.
struct TailOverflow : Error {
    using Error::Error;
};
struct TruncationTooSmall : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct SingularJacobian : Error {
    using Error::Error;
};
struct UnknownBranch : Error {
    using Error::Error;
};
struct EigNoConvergence : Error {
    using Error::Error;
};
struct IndeterminateIndex : Error {
    using Error::Error;
};
struct BlowUp : Error {
    using Error::Error;
};

// Complex amplitude vector alpha_0..alpha_{N-1} at Galerkin truncation N.
struct AmplitudeState {
    std::vector<cplx> alpha;

    AmplitudeState() = default;
    explicit AmplitudeState(int n) : alpha(static_cast<size_t>(n)) {}
    explicit AmplitudeState(std::vector<cplx> a) : alpha(std::move(a)) {}

    int truncation() const { return static_cast<int>(alpha.size()); }
};

// H (energy), Q (charge), E (linear energy) and the complex invariant Z.
struct ConservedSet {
    double H = 0.0;
    double Q = 0.0;
    double E = 0.0;
    cplx Z{0.0, 0.0};
};

// Real stationary amplitude profile A with frequencies (lambda, omega):
// alpha_n(t) = A_n exp(-i lambda t + i n omega t).
struct StationaryState {
    std::vector<double> A;
    double lambda = 0.0;
    double omega = 0.0;
    // Set by family constructors when the geometric tail p^N is not
    // resolved below the tail tolerance at the requested truncation.
    bool tail_warning = false;

    StationaryState() = default;
    StationaryState(std::vector<double> amps, double lam, double om)
        : A(std::move(amps)), lambda(lam), omega(om) {}

    int truncation() const { return static_cast<int>(A.size()); }

    // Complex amplitudes of the instantaneous state at t = 0.
    AmplitudeState amplitudes() const {
        AmplitudeState s(truncation());
        for (int n = 0; n < truncation(); ++n) s.alpha[n] = A[n];
        return s;
    }
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw DomainError(what);
}

}  // namespace confflow
