// ckord command line: ordinal calculator, classification and distance
// queries, operator construction dumps, and seeded verification runs.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ckord/distance.hpp"
#include "ckord/json_io.hpp"
#include "ckord/verify.hpp"

using namespace ckord;

namespace {

std::string decimal(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << std::fixed << v;
    return os.str();
}

std::string radical_text(const Radical& v) {
    if (v.is_rational()) return v.to_string();
    return v.to_string() + " = " + decimal(v.to_double());
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

struct FamilySpec {
    std::string family;
    std::string alpha = "w";
    std::string beta = "1";
    std::uint64_t k = 2;
    std::uint64_t n = 2;
    std::string lambda = "optimal";
};

void add_family_options(CLI::App* cmd, FamilySpec& spec) {
    cmd->add_option("family", spec.family, "tk | power | powerbeta | omega2 | c0c")
        ->required();
    cmd->add_option("--alpha", spec.alpha, "ordinal exponent parameter (text grammar)");
    cmd->add_option("--beta", spec.beta, "ordinal tail parameter (powerbeta)");
    cmd->add_option("--k", spec.k, "coefficient to fold (tk)");
    cmd->add_option("--n", spec.n, "exponent stretch depth (power, powerbeta)");
    cmd->add_option("--lambda", spec.lambda,
                    "comma separated rational weights, or 'optimal'");
}

std::vector<Rational> parse_weights(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss{text};
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(Rational::parse(part));
    return out;
}

std::uint64_t expected_weights(const FamilySpec& spec) {
    if (spec.family == "tk") return spec.k;
    if (spec.family == "power") return spec.n;
    if (spec.family == "powerbeta") return spec.n + 1;
    if (spec.family == "omega2") return 1;
    if (spec.family == "c0c") return 0;
    throw Error("unknown family '" + spec.family + "' (use tk, power, powerbeta, omega2, c0c)");
}

std::vector<double> optimal_for(const FamilySpec& spec) {
    if (spec.family == "tk") return optimal_weights_tk(spec.k);
    if (spec.family == "power") return optimal_weights_power(spec.n);
    if (spec.family == "powerbeta") return optimal_weights_power(spec.n + 1);
    if (spec.family == "omega2") return {(3.0 - std::sqrt(3.0)) / 2.0};
    return {};
}

template <class S>
OperatorPair<S> build_family(const FamilySpec& spec, const std::vector<S>& lam) {
    if (spec.family == "tk") return build_tk<S>(parse_ordinal(spec.alpha), spec.k, lam);
    if (spec.family == "power")
        return build_power_iso<S>(parse_ordinal(spec.alpha), spec.n, lam);
    if (spec.family == "powerbeta")
        return build_power_beta_iso<S>(parse_ordinal(spec.alpha), parse_ordinal(spec.beta),
                                       spec.n, lam);
    if (spec.family == "omega2") return build_omega2_family<S>(lam.at(0));
    if (spec.family == "c0c") return build_c0_c<S>();
    throw Error("unknown family '" + spec.family + "'");
}

template <class S>
nlohmann::json operator_description(const OperatorPair<S>& pair) {
    auto describe = [](const CkOperator<S>& op) {
        nlohmann::json regions = nlohmann::json::array();
        for (const auto& r : op.regions) {
            nlohmann::json weights = nlohmann::json::array();
            for (const auto& w : r.weights) weights.push_back(detail::scalar_text(w));
            nlohmann::json row = nlohmann::json::array();
            if (!r.probes.empty()) {
                for (const auto& [w, p] : r.row(r.probes.front()).terms)
                    row.push_back({{"weight", detail::scalar_text(w)},
                                   {"point", format_ordinal(p)}});
            }
            regions.push_back({{"name", r.name},
                               {"weights", weights},
                               {"sample_row", row}});
        }
        return nlohmann::json{{"name", op.name},
                              {"domain_top", format_ordinal(op.domain_top)},
                              {"codomain_top", format_ordinal(op.codomain_top)},
                              {"positive", op.positive()},
                              {"regions", regions}};
    };
    S dist = distortion(pair);
    return nlohmann::json{
        {"schema", 1},
        {"forward", describe(pair.forward)},
        {"inverse", describe(pair.inverse)},
        {"norms",
         {{"T", scalar_to_double(pair.forward.op_norm())},
          {"S", scalar_to_double(pair.inverse.op_norm())},
          {"distortion", scalar_to_double(dist)},
          {"distortion_exact", detail::scalar_text(dist)}}}};
}

template <class S>
int run_verify(const OperatorPair<S>& pair, const VerifyConfig& cfg, bool json_output) {
    VerifyReport<S> report = verify_operator(pair, cfg);
    if (json_output) {
        nlohmann::json j = report_to_json(report);
        j["config"] = {{"samples", cfg.samples},
                       {"points", cfg.points},
                       {"seed", cfg.seed},
                       {"depth", cfg.depth}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "operator: " << report.operator_name << "\n";
        for (const auto& c : report.checks) {
            std::cout << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name;
            if (!c.witness.empty()) std::cout << " (" << c.witness << ")";
            std::cout << "\n";
        }
        std::cout << "  norms: T = " << detail::scalar_text(report.norm_forward)
                  << ", S = " << detail::scalar_text(report.norm_inverse)
                  << ", distortion = " << decimal(scalar_to_double(report.distortion_value))
                  << "\n";
        std::cout << "  inverse positive: " << yesno(report.inverse_positive) << "\n";
        if (const CheckResult* f = report.first_failure())
            std::cout << "first failure: " << f->name << " " << f->witness << "\n";
    }
    return report.all_passed() ? 0 : 1;
}

std::string bound_line(const DistanceBound& b) {
    std::ostringstream os;
    if (b.infinite) {
        os << "no isomorphism of the requested kind exists: distance = infinity";
    } else if (b.exact) {
        os << "exact: " << radical_text(*b.exact);
    } else {
        os << "bounds: [" << radical_text(b.lower) << ", " << radical_text(b.upper) << "]";
    }
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    if (const char* cap = std::getenv("CK_DEPTH_CAP")) {
        int v = std::atoi(cap);
        if (v > 0) ordinal_depth_cap().store(v);
    }

    CLI::App app{"ordinal C(K) calculator: classification, distances, constructions"};
    app.require_subcommand(1);

    std::string ord_expr;
    auto* ord_cmd = app.add_subcommand("ord", "evaluate an ordinal expression");
    ord_cmd->add_option("expr", ord_expr, "ordinal in the text grammar")->required();

    std::string cb_gamma, cb_beta;
    auto* cb_cmd = app.add_subcommand("cb", "Cantor-Bendixson derivative of [1, gamma]");
    cb_cmd->add_option("gamma", cb_gamma)->required();
    cb_cmd->add_option("beta", cb_beta)->required();

    std::string height_gamma;
    auto* height_cmd = app.add_subcommand("height", "height of [1, gamma]");
    height_cmd->add_option("gamma", height_gamma)->required();

    std::string cls_a, cls_b, cls_output = "text";
    auto* cls_cmd = app.add_subcommand("classify", "homeomorphism/isomorphism classification");
    cls_cmd->add_option("a", cls_a)->required();
    cls_cmd->add_option("b", cls_b)->required();
    cls_cmd->add_option("--output", cls_output, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    std::string dist_a, dist_b, dist_from = "a", dist_output = "text";
    bool dist_positive = false;
    auto* dist_cmd = app.add_subcommand("distance", "Banach-Mazur distance bounds");
    dist_cmd->add_option("a", dist_a)->required();
    dist_cmd->add_option("b", dist_b)->required();
    dist_cmd->add_flag("--positive", dist_positive, "one-sided positive distance");
    dist_cmd->add_option("--from", dist_from, "direction for --positive: a or b")
        ->check(CLI::IsMember({"a", "b"}));
    dist_cmd->add_option("--output", dist_output, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    FamilySpec construct_spec;
    auto* construct_cmd = app.add_subcommand("construct", "emit an operator description");
    add_family_options(construct_cmd, construct_spec);

    FamilySpec verify_spec;
    VerifyConfig cfg;
    std::string output_mode = "text";
    auto* verify_cmd = app.add_subcommand("verify", "run the verification harness");
    add_family_options(verify_cmd, verify_spec);
    verify_cmd->add_option("--samples", cfg.samples, "step functions per direction");
    verify_cmd->add_option("--points", cfg.points, "evaluation points per function");
    verify_cmd->add_option("--seed", cfg.seed, "random seed");
    verify_cmd->add_option("--depth", cfg.depth, "stabilization horizon");
    verify_cmd->add_option("--output", output_mode, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ord_cmd) {
            std::cout << format_ordinal(parse_ordinal(ord_expr)) << "\n";
            return 0;
        }
        if (*cb_cmd) {
            Ordinal gamma = parse_ordinal(cb_gamma);
            Ordinal beta = parse_ordinal(cb_beta);
            DerivedSet d = cb_derivative(ClosedInterval::from_one(gamma), beta);
            if (d.empty()) {
                std::cout << "empty\n";
            } else {
                std::cout << "{ " << format_ordinal(d.multiplier) << " * i : i in [1, "
                          << format_ordinal(d.index_range->hi) << "] }\n";
            }
            return 0;
        }
        if (*height_cmd) {
            HeightInfo h = height(ClosedInterval::from_one(parse_ordinal(height_gamma)));
            std::cout << "height: " << format_ordinal(h.h)
                      << "; last derivative size: " << h.last_count.to_string() << "\n";
            return 0;
        }
        if (*cls_cmd) {
            Classification c = classify(parse_ordinal(cls_a), parse_ordinal(cls_b));
            if (cls_output == "json") {
                nlohmann::json j{{"schema", 1},
                                 {"homeomorphic", c.homeo},
                                 {"isomorphic", c.iso},
                                 {"positive_a_to_b", c.pos_a_to_b},
                                 {"positive_b_to_a", c.pos_b_to_a}};
                std::cout << j.dump(2) << "\n";
                return 0;
            }
            std::cout << "homeomorphic: " << yesno(c.homeo)
                      << "; isomorphic: " << yesno(c.iso);
            if (c.pos_a_to_b == c.pos_b_to_a)
                std::cout << "; positive both directions: " << yesno(c.pos_a_to_b);
            else
                std::cout << "; positive a->b: " << yesno(c.pos_a_to_b)
                          << "; positive b->a: " << yesno(c.pos_b_to_a);
            std::cout << "\n";
            return 0;
        }
        if (*dist_cmd) {
            Ordinal a = parse_ordinal(dist_a);
            Ordinal b = parse_ordinal(dist_b);
            DistanceBound bound;
            if (!dist_positive) {
                bound = distance_bounds(a, b, DistanceMode::classical);
            } else if (dist_from == "a") {
                bound = distance_bounds(a, b, DistanceMode::positive_directed);
            } else {
                bound = distance_bounds(b, a, DistanceMode::positive_directed);
            }
            if (dist_output == "json") {
                nlohmann::json j = distance_bound_to_json(bound);
                j["schema"] = 1;
                std::cout << j.dump(2) << "\n";
                return 0;
            }
            std::cout << bound_line(bound) << "\n";
            if (!bound.citations.empty()) {
                std::cout << "citations: ";
                for (std::size_t i = 0; i < bound.citations.size(); ++i)
                    std::cout << (i ? "; " : "") << bound.citations[i];
                std::cout << "\n";
            }
            if (!bound.note.empty()) std::cout << "note: " << bound.note << "\n";
            return 0;
        }
        if (*construct_cmd) {
            nlohmann::json j;
            if (construct_spec.family != "c0c" && construct_spec.lambda == "optimal") {
                auto pair = build_family<double>(construct_spec, optimal_for(construct_spec));
                j = operator_description(pair);
                j["lambda"] = "optimal";
            } else {
                std::vector<Rational> lam;
                if (construct_spec.family != "c0c") lam = parse_weights(construct_spec.lambda);
                if (lam.size() != expected_weights(construct_spec))
                    throw BadWeights("family '" + construct_spec.family + "' needs " +
                                     std::to_string(expected_weights(construct_spec)) +
                                     " weights");
                auto pair = build_family<Rational>(construct_spec, lam);
                j = operator_description(pair);
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*verify_cmd) {
            const bool json_output = output_mode == "json";
            if (verify_spec.family != "c0c" && verify_spec.lambda == "optimal") {
                auto pair = build_family<double>(verify_spec, optimal_for(verify_spec));
                return run_verify(pair, cfg, json_output);
            }
            std::vector<Rational> lam;
            if (verify_spec.family != "c0c") lam = parse_weights(verify_spec.lambda);
            if (lam.size() != expected_weights(verify_spec))
                throw BadWeights("family '" + verify_spec.family + "' needs " +
                                 std::to_string(expected_weights(verify_spec)) + " weights");
            auto pair = build_family<Rational>(verify_spec, lam);
            return run_verify(pair, cfg, json_output);
        }
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error: " << e.what()
                  << "\ngrammar: ord := term ('+' term)*; term := 'w' ('^' factor)? ('*' nat)? | nat;"
                  << " factor := nat | 'w' | '(' ord ')'\n";
        return 2;
    } catch (const BadWeights& e) {
        std::cerr << "bad weights: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
