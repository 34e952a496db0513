// fixtures.hpp
// Named operator/state fixtures available to experiment configs.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "urlab/bw.hpp"
#include "urlab/hilbert.hpp"
#include "urlab/mt.hpp"

namespace urlab::cli {

struct Fixture {
    std::string name;
    std::string kind; // pair | family | zeno | bw
    std::string description;
};

std::vector<Fixture> list_fixtures();

// "pauli-xy", "pauli-xz", "pauli-yz", or "osc-N" for the truncated
// oscillator (X, P) pair at dimension N.
std::pair<Operator, Operator> resolve_pair(const std::string& name);

struct FamilyFixture {
    mt::FamilyKind kind;
    Operator a;
    Operator h;
    State anchor;
    State direction;
};
// "mt-eta-pi2", "mt-eta-pi6", "mt-lambda-pi2", "mt-lambda-pi6"
FamilyFixture resolve_family(const std::string& name);

struct ZenoFixture {
    Operator h;
    State psi;
};
// "zeno-sx" (H = sigma_x, psi = |0>), "zeno-stationary" (H = sigma_z, |0>)
ZenoFixture resolve_zeno(const std::string& name);

// "bw-default" (E0 = 1, Gamma0 = 0.1, E_min = 0)
bw::BWParams resolve_bw(const std::string& name);

} // namespace urlab::cli
