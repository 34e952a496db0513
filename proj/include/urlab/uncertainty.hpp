// uncertainty.hpp
// General uncertainty relations for a pair of observables: standard
// deviations, the commutator and covariance lower bounds, the cross-term
// decomposition, and the zero-lower-bound detector over full eigenbases.

#pragma once

#include <vector>

#include "urlab/hilbert.hpp"

namespace urlab::uncertainty {

// All quantities for one (A, B, phi) triple. Squared and rooted forms are
// both stored; the interesting regime sits exactly at the zero boundary.
struct UncertaintyReport {
    double delta_a = 0.0;
    double delta_b = 0.0;
    double product = 0.0;
    double product_squared = 0.0;
    double schwarz_rhs = 0.0; // |<dA dB>|^2
    double robertson_bound = 0.0; // |<[A,B]>|/2
    double robertson_bound_squared = 0.0;
    double schrodinger_bound_squared = 0.0;
    double schrodinger_bound = 0.0;
    double covariance_term = 0.0; // <AB+BA>/2 - <A><B>
    Complex commutator_expectation{0.0, 0.0};
    bool zero_bound = false;
    bool eigenvector_of_a = false;
    bool eigenvector_of_b = false;
    bool real_cross_moment = false;
    double scale = 0.0; // ||A||_F * ||B||_F, recorded for offline slack checks
};

// (F - <F>) |phi>
Vector deviation(const Operator& f, const State& phi);

// ||(F - <F>)|phi>||, cross-checked against sqrt(<F^2> - <F>^2).
double std_dev(const Operator& f, const State& phi);

double robertson_bound(const Operator& a, const Operator& b, const State& phi);

struct SchrodingerBound {
    double bound_squared;
    double covariance_term;
    double commutator_term; // |<[A,B]>/2|^2
};
SchrodingerBound schrodinger_bound(const Operator& a, const Operator& b,
                                   const State& phi);

// |<dA dB>|^2 computed directly and through the anticommutator/commutator
// split; returns the absolute difference.
double cross_term_identity(const Operator& a, const Operator& b, const State& phi);

UncertaintyReport verify(const Operator& a, const Operator& b, const State& phi);

struct ZeroBoundEntry {
    char source; // 'A' or 'B': whose eigenbasis the state came from
    Index index;
    double eigenvalue;
    State state;
    UncertaintyReport report;
};

struct ZeroBoundScan {
    std::vector<ZeroBoundEntry> entries;
    Index span_rank; // rank of the stacked eigenvectors
};

// Evaluates verify() on the full eigenbasis of A and of B. Every entry must
// come out flagged zero_bound; a violation is an internal error.
ZeroBoundScan zero_bound_scan(const Operator& a, const Operator& b);

} // namespace urlab::uncertainty
