#include "urlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "urlab/bw.hpp"
#include "urlab/fixtures.hpp"
#include "urlab/hilbert.hpp"
#include "urlab/mt.hpp"
#include "urlab/uncertainty.hpp"
#include "urlab/zeno.hpp"

namespace urlab::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kExperiments = {"verify", "zero-scan", "mt",
                                            "mt-limits", "zeno", "bw"};

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.contains(it.key()))
            throw Error(ErrorCode::ConfigValidate,
                        "unknown key '" + it.key() + "' in " + where);
}

double number_param(const json& params, const char* key, double fallback) {
    if (!params.contains(key))
        return fallback;
    if (!params.at(key).is_number())
        throw Error(ErrorCode::ConfigValidate,
                    std::string(key) + " must be a number");
    return params.at(key).get<double>();
}

long integer_param(const json& params, const char* key, long fallback) {
    if (!params.contains(key))
        return fallback;
    if (!params.at(key).is_number_integer())
        throw Error(ErrorCode::ConfigValidate,
                    std::string(key) + " must be an integer");
    return params.at(key).get<long>();
}

std::string string_param(const json& params, const char* key,
                         const std::string& fallback) {
    if (!params.contains(key))
        return fallback;
    if (!params.at(key).is_string())
        throw Error(ErrorCode::ConfigValidate,
                    std::string(key) + " must be a string");
    return params.at(key).get<std::string>();
}

void validate_params(const std::string& experiment, const json& params) {
    if (!params.is_object())
        throw Error(ErrorCode::ConfigValidate, "params must be an object");
    const std::string where = "params for " + experiment;
    if (experiment == "verify" || experiment == "zero-scan") {
        check_keys(params, {"fixture"}, where);
        if (params.contains("fixture") && !params.at("fixture").is_string())
            throw Error(ErrorCode::ConfigValidate, "fixture must be a string");
    } else if (experiment == "mt") {
        check_keys(params, {"fixture", "eigen_pairs", "ehrenfest_trials"}, where);
        if (params.contains("fixture") && !params.at("fixture").is_string())
            throw Error(ErrorCode::ConfigValidate, "fixture must be a string");
        if (integer_param(params, "eigen_pairs", 100) < 0 ||
            integer_param(params, "ehrenfest_trials", 1000) < 0)
            throw Error(ErrorCode::ConfigValidate, "mt counts must be >= 0");
    } else if (experiment == "mt-limits") {
        check_keys(params, {"fixtures", "grid_start", "grid_ratio", "grid_points"},
                   where);
        if (params.contains("fixtures")) {
            if (!params.at("fixtures").is_array())
                throw Error(ErrorCode::ConfigValidate, "fixtures must be an array");
            for (const json& f : params.at("fixtures"))
                if (!f.is_string())
                    throw Error(ErrorCode::ConfigValidate,
                                "fixture names must be strings");
        }
        if (!(number_param(params, "grid_start", 1e-1) > 0.0) ||
            !(number_param(params, "grid_ratio", 10.0) > 1.0) ||
            integer_param(params, "grid_points", 5) < 2)
            throw Error(ErrorCode::ConfigValidate, "bad perturbation grid");
    } else if (experiment == "zeno") {
        check_keys(params,
                   {"fixture", "total_t", "n_list", "dt", "dt0", "halvings",
                    "cutoff"},
                   where);
        if (!(number_param(params, "total_t", 1.0) > 0.0) ||
            !(number_param(params, "dt", 0.01) > 0.0) ||
            !(number_param(params, "dt0", 0.1) > 0.0) ||
            !(number_param(params, "cutoff", zeno::kConditionCutoff) > 0.0) ||
            integer_param(params, "halvings", 4) < 1)
            throw Error(ErrorCode::ConfigValidate, "bad zeno parameters");
        if (params.contains("n_list")) {
            if (!params.at("n_list").is_array() || params.at("n_list").empty())
                throw Error(ErrorCode::ConfigValidate,
                            "n_list must be a non-empty array");
            long previous = 0;
            for (const json& n : params.at("n_list")) {
                if (!n.is_number_integer() || n.get<long>() <= previous)
                    throw Error(ErrorCode::ConfigValidate,
                                "n_list must be strictly increasing positive "
                                "integers");
                previous = n.get<long>();
            }
        }
    } else if (experiment == "bw") {
        check_keys(params,
                   {"fixture", "e0", "gamma0", "e_min", "lambda_start",
                    "doublings"},
                   where);
        const bool explicit_params = params.contains("e0") ||
                                     params.contains("gamma0") ||
                                     params.contains("e_min");
        if (explicit_params &&
            !(params.contains("e0") && params.contains("gamma0") &&
              params.contains("e_min")))
            throw Error(ErrorCode::ConfigValidate,
                        "explicit Breit-Wigner parameters need e0, gamma0 and "
                        "e_min together");
        if (explicit_params && params.contains("fixture"))
            throw Error(ErrorCode::ConfigValidate,
                        "give either a fixture name or explicit parameters");
        if (explicit_params && !(number_param(params, "gamma0", 1.0) > 0.0))
            throw Error(ErrorCode::ConfigValidate, "gamma0 must be positive");
        if (!(number_param(params, "lambda_start", 1e3) > 0.0) ||
            integer_param(params, "doublings", 10) < 5)
            throw Error(ErrorCode::ConfigValidate,
                        "need lambda_start > 0 and at least 5 doublings");
    }
}

std::string tau_status_text(mt::TauStatus status) { return mt::to_string(status); }

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ConfigParse, "cannot read config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigParse, std::string("bad JSON: ") + e.what());
    }
    return config_from_json(j);
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object())
        throw Error(ErrorCode::ConfigValidate, "config must be a JSON object");
    check_keys(j,
               {"experiment", "hbar", "seed", "dims", "trials", "format",
                "output", "params"},
               "config");

    RunConfig config;
    if (!j.contains("experiment") || !j.at("experiment").is_string())
        throw Error(ErrorCode::ConfigValidate, "experiment name is required");
    config.experiment = j.at("experiment").get<std::string>();
    if (!kExperiments.contains(config.experiment))
        throw Error(ErrorCode::ConfigValidate,
                    "unknown experiment " + config.experiment);

    if (j.contains("hbar")) {
        if (!j.at("hbar").is_number())
            throw Error(ErrorCode::ConfigValidate, "hbar must be a number");
        config.hbar = j.at("hbar").get<double>();
    }
    if (!(config.hbar > 0.0) || !std::isfinite(config.hbar))
        throw Error(ErrorCode::ConfigValidate, "hbar must be positive and finite");

    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_integer() ||
            (!s.is_number_unsigned() && s.get<long long>() < 0))
            throw Error(ErrorCode::ConfigValidate,
                        "seed must be a non-negative integer");
        config.seed = s.get<std::uint64_t>();
    }

    if (j.contains("dims")) {
        if (!j.at("dims").is_array() || j.at("dims").empty())
            throw Error(ErrorCode::ConfigValidate, "dims must be a non-empty array");
        config.dims.clear();
        for (const json& d : j.at("dims")) {
            if (!d.is_number_integer())
                throw Error(ErrorCode::ConfigValidate, "dims must hold integers");
            const long dim = d.get<long>();
            if (dim < 2 || dim > 200)
                throw Error(ErrorCode::ConfigValidate,
                            "dimensions must lie in [2, 200]");
            config.dims.push_back(dim);
        }
    }

    if (j.contains("trials")) {
        if (!j.at("trials").is_number_integer())
            throw Error(ErrorCode::ConfigValidate, "trials must be an integer");
        config.trials = j.at("trials").get<long>();
        if (config.trials < 1 || config.trials > 10000000)
            throw Error(ErrorCode::ConfigValidate,
                        "trials must lie in [1, 10^7]");
    }

    if (j.contains("format")) {
        if (!j.at("format").is_string())
            throw Error(ErrorCode::ConfigValidate, "format must be a string");
        config.format = j.at("format").get<std::string>();
        if (config.format != "csv" && config.format != "json")
            throw Error(ErrorCode::ConfigValidate, "format must be csv or json");
    }

    if (j.contains("output")) {
        if (!j.at("output").is_string())
            throw Error(ErrorCode::ConfigValidate, "output must be a string");
        config.output_dir = j.at("output").get<std::string>();
    }

    if (j.contains("params"))
        config.params = j.at("params");
    validate_params(config.experiment, config.params);
    return config;
}

json config_to_json(const RunConfig& config) {
    return json{{"experiment", config.experiment}, {"hbar", config.hbar},
                {"seed", config.seed},             {"dims", config.dims},
                {"trials", config.trials},         {"format", config.format},
                {"output", config.output_dir},     {"params", config.params}};
}

Table run_verify(const RunConfig& config, std::vector<std::string>& failures) {
    Table table{{"trial", "dim", "delta_a", "delta_b", "product",
                 "product_squared", "schwarz_rhs", "schrodinger_bound_squared",
                 "schrodinger_bound", "robertson_bound", "covariance_term",
                 "commutator_re", "commutator_im", "cross_term_residual",
                 "zero_bound", "eigenvector_of_a", "eigenvector_of_b",
                 "real_cross_moment", "scale"},
                {}};
    Rng rng(config.seed);
    std::optional<std::pair<Operator, Operator>> fixture;
    if (config.params.contains("fixture"))
        fixture = resolve_pair(config.params.at("fixture").get<std::string>());
    for (long trial = 0; trial < config.trials; ++trial) {
        const long dim = fixture ? fixture->first.dim()
                                 : config.dims[static_cast<std::size_t>(trial) %
                                               config.dims.size()];
        std::optional<Operator> drawn_a, drawn_b;
        if (!fixture) {
            drawn_a = random_hermitian(dim, rng);
            drawn_b = random_hermitian(dim, rng);
        }
        const Operator& a = fixture ? fixture->first : *drawn_a;
        const Operator& b = fixture ? fixture->second : *drawn_b;
        const State phi = random_state(dim, rng);
        const uncertainty::UncertaintyReport rep = uncertainty::verify(a, b, phi);
        const double residual = uncertainty::cross_term_identity(a, b, phi);

        const double slack = 1e-10 * rep.scale * rep.scale;
        auto fail = [&](const char* what) {
            std::ostringstream os;
            os << "trial " << trial << " (dim " << dim << "): " << what;
            failures.push_back(os.str());
        };
        if (rep.product_squared + slack < rep.schwarz_rhs)
            fail("Schwarz link violated");
        if (rep.schwarz_rhs + slack < rep.schrodinger_bound_squared)
            fail("cross-term link violated");
        if (rep.schrodinger_bound_squared + slack < rep.robertson_bound_squared)
            fail("commutator link violated");
        if (residual > slack)
            fail("cross-term identity residual above tolerance");

        table.add_row({static_cast<long long>(trial), static_cast<long long>(dim),
                       rep.delta_a,
                       rep.delta_b, rep.product, rep.product_squared,
                       rep.schwarz_rhs, rep.schrodinger_bound_squared,
                       rep.schrodinger_bound, rep.robertson_bound,
                       rep.covariance_term, rep.commutator_expectation.real(),
                       rep.commutator_expectation.imag(), residual,
                       rep.zero_bound, rep.eigenvector_of_a, rep.eigenvector_of_b,
                       rep.real_cross_moment, rep.scale});
    }
    return table;
}

Table run_zero_scan(const RunConfig& config, std::vector<std::string>& failures) {
    Table table{{"pair", "dim", "source", "index", "eigenvalue", "delta_a",
                 "delta_b", "robertson_bound", "schrodinger_bound", "zero_bound",
                 "span_rank"},
                {}};
    Rng rng(config.seed);
    std::optional<std::pair<Operator, Operator>> fixture;
    if (config.params.contains("fixture"))
        fixture = resolve_pair(config.params.at("fixture").get<std::string>());
    const long pairs = fixture ? 1 : config.trials; // a fixed pair scans once
    for (long pair = 0; pair < pairs; ++pair) {
        const long dim = fixture ? fixture->first.dim()
                                 : config.dims[static_cast<std::size_t>(pair) %
                                               config.dims.size()];
        std::optional<Operator> drawn_a, drawn_b;
        if (!fixture) {
            drawn_a = random_hermitian(dim, rng);
            drawn_b = random_hermitian(dim, rng);
        }
        const Operator& a = fixture ? fixture->first : *drawn_a;
        const Operator& b = fixture ? fixture->second : *drawn_b;
        try {
            const uncertainty::ZeroBoundScan scan = uncertainty::zero_bound_scan(a, b);
            if (scan.span_rank != dim) {
                std::ostringstream os;
                os << "pair " << pair << ": zero-bound states span rank "
                   << scan.span_rank << " instead of " << dim;
                failures.push_back(os.str());
            }
            for (const uncertainty::ZeroBoundEntry& entry : scan.entries)
                table.add_row({static_cast<long long>(pair),
                               static_cast<long long>(dim),
                               std::string(1, entry.source),
                               static_cast<long long>(entry.index),
                               entry.eigenvalue, entry.report.delta_a,
                               entry.report.delta_b, entry.report.robertson_bound,
                               entry.report.schrodinger_bound,
                               entry.report.zero_bound,
                               static_cast<long long>(scan.span_rank)});
        } catch (const Error& e) {
            std::ostringstream os;
            os << "pair " << pair << ": " << e.what();
            failures.push_back(os.str());
        }
    }
    return table;
}

Table run_mt(const RunConfig& config, std::vector<std::string>& failures) {
    Table table{{"row", "dim", "state_kind", "delta_a", "delta_e", "comm_abs",
                 "ehrenfest_derivative", "tau_status", "tau", "mt_product",
                 "fd_lhs", "fd_rhs", "fd_residual"},
                {}};
    const long eigen_pairs = integer_param(config.params, "eigen_pairs", 100);
    const long ehrenfest_trials =
        integer_param(config.params, "ehrenfest_trials", 1000);
    const double hbar = config.hbar;
    Rng rng(config.seed);
    long long row = 0;

    std::optional<std::pair<Operator, Operator>> fixture;
    std::optional<Spectrum> fixture_spec_h;
    if (config.params.contains("fixture")) {
        fixture = resolve_pair(config.params.at("fixture").get<std::string>());
        fixture_spec_h = eigendecompose(fixture->second);
    }

    auto add = [&](long long dim, const std::string& kind,
                   const mt::MTReport& rep, const Cell& lhs, const Cell& rhs,
                   const Cell& residual) {
        table.add_row({row++, dim, kind, rep.delta_a, rep.delta_e,
                       std::abs(rep.commutator_expectation),
                       rep.ehrenfest_derivative, tau_status_text(rep.tau_status),
                       cell(rep.tau), cell(rep.mt_product), lhs, rhs, residual});
    };

    for (long trial = 0; trial < config.trials; ++trial) {
        const long dim = fixture ? fixture->first.dim()
                                 : config.dims[static_cast<std::size_t>(trial) %
                                               config.dims.size()];
        std::optional<Operator> drawn_a, drawn_h;
        if (!fixture) {
            drawn_a = random_hermitian(dim, rng);
            drawn_h = random_hermitian(dim, rng);
        }
        const Operator& a = fixture ? fixture->first : *drawn_a;
        const Operator& h = fixture ? fixture->second : *drawn_h;
        const State phi = random_state(dim, rng);
        const mt::MTReport rep = mt::tau_characteristic(a, h, phi, hbar);
        const double scale = a.frobenius_norm() * h.frobenius_norm();

        if (rep.tau_status == mt::TauStatus::BoundViolated) {
            std::ostringstream os;
            os << "trial " << trial << ": MT product " << *rep.mt_product
               << " below hbar/2";
            failures.push_back(os.str());
        }
        if (rep.delta_a * rep.delta_e + 1e-9 * scale <
            0.5 * hbar * rep.ehrenfest_derivative) {
            std::ostringstream os;
            os << "trial " << trial << ": pre-division inequality violated";
            failures.push_back(os.str());
        }

        Cell lhs, rhs, residual;
        if (trial < ehrenfest_trials) {
            try {
                std::optional<Spectrum> drawn_spec;
                if (!fixture)
                    drawn_spec = eigendecompose(h);
                const Spectrum& spec = fixture ? *fixture_spec_h : *drawn_spec;
                const mt::EhrenfestCheck chk =
                    mt::ehrenfest_check(a, h, spec, phi, hbar);
                lhs = chk.lhs;
                rhs = chk.rhs;
                residual = chk.residual;
            } catch (const Error& e) {
                std::ostringstream os;
                os << "trial " << trial << ": " << e.what();
                failures.push_back(os.str());
            }
        }
        add(dim, "random", rep, lhs, rhs, residual);
    }

    const long pair_count = fixture ? (eigen_pairs > 0 ? 1 : 0) : eigen_pairs;
    for (long pair = 0; pair < pair_count; ++pair) {
        const long dim = fixture ? fixture->first.dim()
                                 : config.dims[static_cast<std::size_t>(pair) %
                                               config.dims.size()];
        std::optional<Operator> drawn_a, drawn_h;
        if (!fixture) {
            drawn_a = random_hermitian(dim, rng);
            drawn_h = random_hermitian(dim, rng);
        }
        const Operator& a = fixture ? fixture->first : *drawn_a;
        const Operator& h = fixture ? fixture->second : *drawn_h;
        const Spectrum spec_h = fixture ? *fixture_spec_h : eigendecompose(h);
        const Spectrum spec_a = eigendecompose(a);
        const double scale = a.frobenius_norm() * h.frobenius_norm();

        for (Index k = 0; k < dim; ++k) {
            const State v = spec_h.eigenvector(k);
            const mt::MTReport rep = mt::tau_characteristic(a, h, v, hbar);
            if (rep.tau_status != mt::TauStatus::UndefinedZeroOverZero) {
                std::ostringstream os;
                os << "pair " << pair << " eigenvector " << k
                   << " of H: tau not flagged undefined";
                failures.push_back(os.str());
            }
            Cell lhs, rhs, residual;
            try {
                const mt::EhrenfestCheck chk =
                    mt::ehrenfest_check(a, h, spec_h, v, hbar);
                if (chk.lhs > 1e-10 * scale || chk.rhs > 1e-10 * scale) {
                    std::ostringstream os;
                    os << "pair " << pair << " eigenvector " << k
                       << " of H: d<A>/dt not zero";
                    failures.push_back(os.str());
                }
                lhs = chk.lhs;
                rhs = chk.rhs;
                residual = chk.residual;
            } catch (const Error& e) {
                std::ostringstream os;
                os << "pair " << pair << ": " << e.what();
                failures.push_back(os.str());
            }
            add(dim, "eig_h", rep, lhs, rhs, residual);
        }
        for (Index k = 0; k < dim; ++k) {
            const State v = spec_a.eigenvector(k);
            const mt::MTReport rep = mt::tau_characteristic(a, h, v, hbar);
            if (rep.tau_status != mt::TauStatus::UndefinedZeroOverZero) {
                std::ostringstream os;
                os << "pair " << pair << " eigenvector " << k
                   << " of A: tau not flagged undefined";
                failures.push_back(os.str());
            }
            add(dim, "eig_a", rep, {}, {}, {});
        }
    }
    return table;
}

Table run_mt_limits(const RunConfig& config, std::vector<std::string>& failures) {
    Table table{{"family", "kind", "row_type", "parameter", "delta_a", "delta_h",
                 "comm_abs", "tau", "full_fraction", "distance_to_anchor",
                 "slope", "diverges", "c_psi", "c_psi_error", "tau_limit",
                 "tau_limit_error"},
                {}};
    std::vector<std::string> names = {"mt-eta-pi2", "mt-eta-pi6",
                                      "mt-lambda-pi2", "mt-lambda-pi6"};
    if (config.params.contains("fixtures")) {
        names.clear();
        for (const json& f : config.params.at("fixtures"))
            names.push_back(f.get<std::string>());
    }
    const double start = number_param(config.params, "grid_start", 1e-1);
    const double ratio = number_param(config.params, "grid_ratio", 10.0);
    const long points = integer_param(config.params, "grid_points", 5);
    std::vector<double> grid;
    double g = start;
    for (long k = 0; k < points; ++k) {
        grid.push_back(g);
        g /= ratio;
    }

    std::vector<std::pair<std::string, mt::PerturbationFamily>> lambda_families;
    for (const std::string& name : names) {
        const FamilyFixture fixture = resolve_family(name);
        const std::string kind =
            fixture.kind == mt::FamilyKind::Eta ? "eta" : "lambda";
        try {
            mt::PerturbationFamily family =
                mt::build_family(fixture.kind, fixture.a, fixture.h,
                                 fixture.anchor, fixture.direction, grid,
                                 config.hbar);
            for (const mt::FamilySample& s : family.samples)
                table.add_row({name, kind, std::string("sample"), s.parameter,
                               s.delta_a, s.delta_h, s.comm_abs, cell(s.tau),
                               cell(s.full_fraction), s.distance_to_anchor, {},
                               {}, {}, {}, {}, {}});

            if (family.samples.size() >= 3) {
                const mt::FamilySample& last = family.samples.back();
                const mt::FamilySample& back2 =
                    family.samples[family.samples.size() - 3];
                if (last.full_fraction && back2.full_fraction &&
                    std::abs(*back2.full_fraction - *last.full_fraction) >
                        0.05 * std::abs(*last.full_fraction))
                    failures.push_back(name + ": full fraction not stable over "
                                             "the final grid decades");
            }

            if (fixture.kind == mt::FamilyKind::Eta) {
                const mt::TauLimitScan scan = mt::tau_limit_scan(family);
                const Extrapolation c = mt::c_psi_scan(family);
                if (!scan.diverges)
                    failures.push_back(name + ": tau failed to diverge");
                table.add_row({name, kind, std::string("summary"), {}, {}, {},
                               {}, {}, {}, {}, scan.slope, scan.diverges,
                               c.value, c.error_estimate, {}, {}});
            } else {
                const Extrapolation limit = mt::tau_lambda_limit_scan(family);
                table.add_row({name, kind, std::string("summary"), {}, {}, {},
                               {}, {}, {}, {}, {}, {}, {}, {}, limit.value,
                               limit.error_estimate});
                lambda_families.emplace_back(name, std::move(family));
            }
        } catch (const Error& e) {
            failures.push_back(name + ": " + e.what());
        }
    }

    if (lambda_families.size() == 2) {
        try {
            mt::tau_lambda_nonuniqueness(lambda_families[0].second,
                                         lambda_families[1].second);
        } catch (const Error& e) {
            failures.push_back(lambda_families[0].first + " vs " +
                               lambda_families[1].first + ": " + e.what());
        }
    }
    return table;
}

Table run_zeno(const RunConfig& config, std::vector<std::string>& failures) {
    Table table{{"row_type", "n", "dt", "probability", "one_minus_p",
                 "n_times_one_minus_p", "condition_parameter",
                 "condition_satisfied", "heisenberg_product",
                 "heisenberg_conflict", "exact", "expansion", "residual",
                 "factor", "at_roundoff_floor"},
                {}};
    const ZenoFixture fixture =
        resolve_zeno(string_param(config.params, "fixture", "zeno-sx"));
    const double total_t = number_param(config.params, "total_t", 1.0);
    const double dt = number_param(config.params, "dt", 0.01);
    const double dt0 = number_param(config.params, "dt0", 0.1);
    const long halvings = integer_param(config.params, "halvings", 4);
    const double cutoff =
        number_param(config.params, "cutoff", zeno::kConditionCutoff);
    std::vector<long> n_list = {10, 100, 1000, 10000};
    if (config.params.contains("n_list")) {
        n_list.clear();
        for (const json& n : config.params.at("n_list"))
            n_list.push_back(n.get<long>());
    }
    const double hbar = config.hbar;

    try {
        const zeno::ConvergenceScan scan = zeno::convergence_scan(
            fixture.h, fixture.psi, total_t, n_list, hbar, cutoff);
        for (const zeno::ConvergenceRow& r : scan.rows) {
            if (r.probability < 0.0 || r.probability > 1.0 + 1e-10)
                failures.push_back("probability outside [0, 1] at n = " +
                                   std::to_string(r.n));
            const double step = total_t / static_cast<double>(r.n);
            const double product = hbar * std::sqrt(r.condition_parameter);
            table.add_row({std::string("convergence"), static_cast<long long>(r.n),
                           step, r.probability, r.one_minus_p,
                           r.n_times_one_minus_p, r.condition_parameter,
                           r.condition_satisfied, product,
                           r.condition_satisfied && product < 0.5 * hbar, {}, {},
                           {}, {}, {}});
        }
    } catch (const Error& e) {
        failures.push_back(std::string("convergence scan: ") + e.what());
    }

    const auto scaling =
        zeno::short_time_scaling(fixture.h, fixture.psi, dt0, halvings, hbar);
    for (std::size_t k = 0; k < scaling.size(); ++k) {
        const zeno::ShortTimeScalingRow& r = scaling[k];
        const zeno::ShortTimeCheck chk =
            zeno::short_time_check(fixture.h, fixture.psi, r.dt, hbar);
        if (k > 0 && !r.at_roundoff_floor && !scaling[k - 1].at_roundoff_floor &&
            (r.factor < 12.0 || r.factor > 20.0)) {
            std::ostringstream os;
            os << "short-time residual factor " << r.factor
               << " outside [12, 20] at dt " << r.dt;
            failures.push_back(os.str());
        }
        table.add_row({std::string("short_time"), {}, r.dt, {}, {}, {}, {}, {},
                       {}, {}, chk.exact, chk.expansion, r.residual,
                       k == 0 ? Cell{} : Cell{r.factor}, r.at_roundoff_floor});
    }

    const zeno::ZenoCondition cond =
        zeno::zeno_condition(fixture.h, fixture.psi, dt, hbar, cutoff);
    table.add_row({std::string("condition"), {}, dt, {}, {}, {}, cond.parameter,
                   cond.satisfied, cond.heisenberg_product,
                   cond.heisenberg_conflict, {}, {}, {}, {}, {}});
    return table;
}

Table run_bw(const RunConfig& config, std::vector<std::string>& failures) {
    Table table{{"row_type", "lambda", "moment_k0", "moment_k1", "moment_k2",
                 "increment_k0", "increment_k1", "increment_k2", "ratio_k0",
                 "ratio_k1", "ratio_k2", "k1_fitted_coefficient",
                 "k1_expected_coefficient", "k2_ratio_limit", "k0_limit_estimate",
                 "delta_h_undefined", "conclusion"},
                {}};
    bw::BWParams params = config.params.contains("e0")
                              ? bw::BWParams::make(
                                    config.params.at("e0").get<double>(),
                                    config.params.at("gamma0").get<double>(),
                                    config.params.at("e_min").get<double>())
                              : resolve_bw(string_param(config.params, "fixture",
                                                        "bw-default"));
    const double lambda_start = number_param(config.params, "lambda_start", 1e3);
    const long doublings = integer_param(config.params, "doublings", 10);

    try {
        bw::normalization(params.e0, params.gamma0, params.e_min);
    } catch (const Error& e) {
        failures.push_back(std::string("normalization cross-check: ") + e.what());
    }

    std::vector<double> schedule;
    double lambda = lambda_start;
    for (long k = 0; k <= doublings; ++k) {
        schedule.push_back(lambda);
        lambda *= 2.0;
    }

    try {
        const bw::DivergenceReport report = bw::divergence_scan(params, schedule);
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const bw::DivergenceRow& r = report.rows[i];
            table.add_row({std::string("scan"), r.lambda, r.moment_k0,
                           r.moment_k1, r.moment_k2,
                           i >= 1 ? Cell{r.increment_k0} : Cell{},
                           i >= 1 ? Cell{r.increment_k1} : Cell{},
                           i >= 1 ? Cell{r.increment_k2} : Cell{},
                           i >= 2 ? Cell{r.ratio_k0} : Cell{},
                           i >= 2 ? Cell{r.ratio_k1} : Cell{},
                           i >= 2 ? Cell{r.ratio_k2} : Cell{}, {}, {}, {}, {},
                           {}, {}});
        }
        if (!report.delta_h_undefined)
            failures.push_back("moment divergence not detected");
        if (std::abs(report.k1_fitted_coefficient -
                     report.k1_expected_coefficient) >
            0.02 * report.k1_expected_coefficient)
            failures.push_back("k=1 increment coefficient off by more than 2%");
        if (std::abs(report.k2_ratio_limit - 2.0) > 0.05)
            failures.push_back("k=2 increment ratio not 2.0 +- 0.05");
        if (std::abs(report.k0_limit_estimate - 1.0) > 1e-8)
            failures.push_back("k=0 moment limit not 1 +- 1e-8");
        table.add_row({std::string("summary"), {}, {}, {}, {}, {}, {}, {}, {},
                       {}, {}, report.k1_fitted_coefficient,
                       report.k1_expected_coefficient, report.k2_ratio_limit,
                       report.k0_limit_estimate, report.delta_h_undefined,
                       report.conclusion});
    } catch (const Error& e) {
        failures.push_back(std::string("divergence scan: ") + e.what());
    }
    return table;
}

RunOutcome run(const RunConfig& raw_config) {
    const RunConfig config = config_from_json(config_to_json(raw_config));
    const auto started = std::chrono::steady_clock::now();

    std::vector<std::string> failures;
    Table table;
    if (config.experiment == "verify")
        table = run_verify(config, failures);
    else if (config.experiment == "zero-scan")
        table = run_zero_scan(config, failures);
    else if (config.experiment == "mt")
        table = run_mt(config, failures);
    else if (config.experiment == "mt-limits")
        table = run_mt_limits(config, failures);
    else if (config.experiment == "zeno")
        table = run_zeno(config, failures);
    else
        table = run_bw(config, failures);

    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);

    RunOutcome outcome;
    outcome.exit_code = failures.empty() ? 0 : 1;
    outcome.failures = failures;

    const std::string data_name =
        config.experiment + (config.format == "csv" ? ".csv" : ".data.json");
    outcome.data_path = (dir / data_name).string();
    if (config.format == "csv")
        write_text_file(outcome.data_path, render_csv(table));
    else
        write_text_file(outcome.data_path, render_json(table).dump(2) + "\n");

    if (!failures.empty()) {
        const std::string failures_name = config.experiment + ".failures.json";
        outcome.failures_path = (dir / failures_name).string();
        const json manifest{{"experiment", config.experiment},
                            {"count", failures.size()},
                            {"failures", failures}};
        write_text_file(outcome.failures_path, manifest.dump(2) + "\n");
    }

    const double wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - started)
            .count();
    const std::string metadata_name = config.experiment + ".meta.json";
    outcome.metadata_path = (dir / metadata_name).string();
    json meta{{"schema_version", kSchemaVersion},
              {"tool", "ur-lab"},
              {"tool_version", kToolVersion},
              {"experiment", config.experiment},
              {"prng_algorithm", Rng::algorithm()},
              {"seed", config.seed},
              {"config", config_to_json(config)},
              {"wall_time_ms", wall_ms},
              {"data_file", data_name},
              {"assertion_failures", failures.size()}};
    meta["failures_file"] = failures.empty()
                                ? json(nullptr)
                                : json(config.experiment + ".failures.json");
    write_text_file(outcome.metadata_path, meta.dump(2) + "\n");
    return outcome;
}

} // namespace urlab::cli
