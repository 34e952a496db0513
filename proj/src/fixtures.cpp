#include "urlab/fixtures.hpp"

#include <cmath>

namespace urlab::cli {

namespace {

State two_level(Complex c0, Complex c1) {
    Vector v(2);
    v << c0, c1;
    return State::normalized(v);
}

State direction_theta(double theta) {
    return two_level(1.0, std::polar(1.0, theta));
}

// eigenvector of sigma_x for eigenvalue +1
State plus_state() { return two_level(1.0, 1.0); }

constexpr const char* kOscPrefix = "osc-";

} // namespace

std::vector<Fixture> list_fixtures() {
    return {
        {"pauli-xy", "pair", "spin pair (sigma_x, sigma_y); [A,B] = 2i sigma_z"},
        {"pauli-xz", "pair", "spin pair (sigma_x, sigma_z); [A,B] = -2i sigma_y"},
        {"pauli-yz", "pair", "spin pair (sigma_y, sigma_z); [A,B] = 2i sigma_x"},
        {"osc-N", "pair",
         "truncated oscillator (X, P) at dimension N, ladder construction "
         "with hbar = m = omega = 1 (e.g. osc-16)"},
        {"mt-eta-pi2", "family",
         "A = sigma_x, H = sigma_z, anchor |0> (eigenvector of H), "
         "direction (1, e^{i pi/2})/sqrt(2)"},
        {"mt-eta-pi6", "family",
         "A = sigma_x, H = sigma_z, anchor |0>, direction (1, e^{i pi/6})/sqrt(2)"},
        {"mt-lambda-pi2", "family",
         "A = sigma_x, H = sigma_z, anchor (1,1)/sqrt(2) (eigenvector of A), "
         "direction (1, e^{i pi/2})/sqrt(2)"},
        {"mt-lambda-pi6", "family",
         "A = sigma_x, H = sigma_z, anchor (1,1)/sqrt(2), "
         "direction (1, e^{i pi/6})/sqrt(2)"},
        {"zeno-sx", "zeno",
         "H = sigma_x, psi = |0>; survival amplitude cos(t)"},
        {"zeno-stationary", "zeno",
         "H = sigma_z, psi = |0>; stationary state, survival probability 1"},
        {"bw-default", "bw", "peak E0 = 1, width Gamma0 = 0.1, threshold E_min = 0"},
    };
}

std::pair<Operator, Operator> resolve_pair(const std::string& name) {
    if (name == "pauli-xy")
        return {pauli_x(), pauli_y()};
    if (name == "pauli-xz")
        return {pauli_x(), pauli_z()};
    if (name == "pauli-yz")
        return {pauli_y(), pauli_z()};
    if (name.rfind(kOscPrefix, 0) == 0) {
        const std::string tail = name.substr(std::string(kOscPrefix).size());
        long dim = 0;
        std::size_t consumed = 0;
        try {
            dim = std::stol(tail, &consumed);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigValidate, "bad oscillator dimension in " + name);
        }
        if (consumed != tail.size())
            throw Error(ErrorCode::ConfigValidate, "bad oscillator dimension in " + name);
        if (dim < 2 || dim > 200)
            throw Error(ErrorCode::ConfigValidate,
                        "oscillator dimension out of range in " + name);
        OscillatorPair osc = truncated_oscillator(dim);
        return {std::move(osc.position), std::move(osc.momentum)};
    }
    throw Error(ErrorCode::ConfigValidate, "unknown operator pair fixture " + name);
}

FamilyFixture resolve_family(const std::string& name) {
    if (name == "mt-eta-pi2")
        return {mt::FamilyKind::Eta, pauli_x(), pauli_z(), basis_state(2, 0),
                direction_theta(M_PI / 2)};
    if (name == "mt-eta-pi6")
        return {mt::FamilyKind::Eta, pauli_x(), pauli_z(), basis_state(2, 0),
                direction_theta(M_PI / 6)};
    if (name == "mt-lambda-pi2")
        return {mt::FamilyKind::Lambda, pauli_x(), pauli_z(), plus_state(),
                direction_theta(M_PI / 2)};
    if (name == "mt-lambda-pi6")
        return {mt::FamilyKind::Lambda, pauli_x(), pauli_z(), plus_state(),
                direction_theta(M_PI / 6)};
    throw Error(ErrorCode::ConfigValidate, "unknown family fixture " + name);
}

ZenoFixture resolve_zeno(const std::string& name) {
    if (name == "zeno-sx")
        return {pauli_x(), basis_state(2, 0)};
    if (name == "zeno-stationary")
        return {pauli_z(), basis_state(2, 0)};
    throw Error(ErrorCode::ConfigValidate, "unknown zeno fixture " + name);
}

bw::BWParams resolve_bw(const std::string& name) {
    if (name == "bw-default")
        return bw::BWParams::make(1.0, 0.1, 0.0);
    throw Error(ErrorCode::ConfigValidate, "unknown Breit-Wigner fixture " + name);
}

} // namespace urlab::cli
