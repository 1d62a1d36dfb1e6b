// Command-line front end: build/inspect CMV matrices, reduce unitaries,
// run hierarchy flows, and emit verification reports.
//
// Exit codes: 0 ok, 2 validation, 3 numerical, 4 I/O.

#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmvkit/asymptotics.hpp"
#include "cmvkit/brackets.hpp"
#include "cmvkit/errors.hpp"
#include "cmvkit/flows.hpp"
#include "cmvkit/reduction.hpp"
#include "cmvkit/serialize.hpp"

using nlohmann::json;
using namespace cmv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Complex literals of the form "1.5", "-2i", "0.5+0.25i", "i", "-i".
cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw validation_error("empty complex literal");
    if (s.back() != 'i') return {std::stod(s), 0.0};
    s.pop_back();
    // locate the split between real and imaginary parts
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto im_of = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return std::stod(t);
    };
    try {
        if (split == std::string::npos) return {0.0, im_of(s)};
        return {std::stod(s.substr(0, split)), im_of(s.substr(split))};
    } catch (const std::exception&) {
        throw validation_error("bad complex literal: " + raw);
    }
}

HierarchyHamiltonian parse_hamiltonian(const std::string& coeffs) {
    cvector c;
    std::string cur;
    for (char ch : coeffs + ",") {
        if (ch == ',') {
            if (!cur.empty()) c.push_back(parse_complex(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (c.empty()) throw validation_error("--f-coeffs: no coefficients given");
    return HierarchyHamiltonian{std::move(c)};
}

VerblunskyCoefficients seeded_alphas(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    cvector a(n);
    for (std::size_t k = 0; k + 1 < n; ++k)
        a[k] = std::polar(0.9 * std::sqrt(unit(gen)), 2.0 * std::numbers::pi * unit(gen));
    a[n - 1] = std::polar(1.0, 2.0 * std::numbers::pi * unit(gen));
    return VerblunskyCoefficients{std::move(a)};
}

json shape_report_json(const ShapeReport& rep) {
    json out;
    out["is_cmv_shape"] = rep.is_cmv_shape;
    out["violations"] = json::array();
    for (const ShapeViolation& v : rep.violations)
        out["violations"].push_back(
            {{"row", v.row},
             {"col", v.col},
             {"kind", v.kind == ShapeViolation::Kind::nonzero_outside_staircase
                          ? "nonzero-above-staircase"
                          : "nonpositive-exposed"}});
    return out;
}

json report_json(const BracketReport& rep) {
    json ids = json::array();
    for (const IdentityResidual& r : rep.identities)
        ids.push_back({{"name", r.name},
                       {"residual", r.residual},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass()}});
    return {{"identities", ids}, {"max_residual", rep.max_residual}, {"all_pass", rep.all_pass()}};
}

int cmd_build(const std::string& input, const std::string& output, double tol_scale) {
    VerblunskyCoefficients v = coefficients_from_json(read_file(input));
    CMVMatrix c = build_cmv(v);
    write_file(output, to_json(c.m));
    std::cout << shape_report_json(check_cmv_shape(c.m, kExposedTol * tol_scale)).dump(2) << "\n";
    return kExitOk;
}

int cmd_reduce(const std::string& input, const std::string& output,
               const std::string& conj_path) {
    Matrix u = matrix_from_json(read_file(input));
    try {
        CmvifyResult r = cmvify(u);
        write_file(output, to_json(r.cmv.m));
        if (!conj_path.empty()) write_file(conj_path, to_json(r.conjugator));
        json info{{"mode", "single"},
                  {"conjugations", r.conjugations},
                  {"reflector_applications", r.reflector_applications}};
        std::cout << info.dump(2) << "\n";
        return kExitOk;
    } catch (const not_cyclic_error&) {
        auto blocks = cmvify_split(u);
        json out{{"mode", "blocks"}, {"blocks", json::array()}};
        for (const CmvBlock& b : blocks) {
            json jb{{"offset", b.offset}, {"size", b.size}};
            jb["matrix"] = json::parse(to_json(b.cmv.m));
            out["blocks"].push_back(jb);
        }
        write_file(output, out.dump(2) + "\n");
        std::cout << json{{"mode", "blocks"}, {"count", blocks.size()}}.dump(2) << "\n";
        return kExitOk;
    }
}

int cmd_measure(const std::string& input, const std::string& output, bool invert) {
    if (invert) {
        SpectralMeasure m = measure_from_json(read_file(input));
        write_file(output, to_json(build_cmv(verblunsky_of_measure(m)).m));
    } else {
        Matrix u = matrix_from_json(read_file(input));
        write_file(output, to_json(measure_of(as_cmv_matrix(u))));
    }
    return kExitOk;
}

int cmd_flow(const std::string& input, const std::string& output, const std::string& coeffs,
             double t0, double t1, std::size_t steps, const std::string& integrator) {
    Matrix u = matrix_from_json(read_file(input));
    CMVMatrix c = as_cmv_matrix(u);
    HierarchyHamiltonian h = parse_hamiltonian(coeffs);
    if (h.degree() > 2 * c.n())
        throw validation_error("flow: polynomial degree above 2n adds no new flows");
    if (!(t1 > t0) || steps < 1) throw validation_error("flow: need t1 > t0 and steps >= 1");
    Integrator ig = Integrator::measure;
    if (integrator == "qr") ig = Integrator::qr;
    else if (integrator == "ode") ig = Integrator::ode;
    else if (integrator != "measure") throw validation_error("flow: unknown integrator");

    std::vector<double> times;
    for (std::size_t i = 0; i <= steps; ++i)
        times.push_back(t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(steps));
    auto traj = sample_trajectory(c, h, times, ig, 4000);

    std::string csv = "t";
    for (std::size_t k = 0; k < c.n(); ++k)
        csv += ",re_alpha_" + std::to_string(k) + ",im_alpha_" + std::to_string(k);
    csv += ",eigenvalue_drift,determinant_drift\n";
    for (const TrajectoryPoint& p : traj) {
        csv += fmt17(p.t);
        for (cplx a : p.alphas) csv += "," + fmt17(a.real()) + "," + fmt17(a.imag());
        csv += "," + fmt17(p.eigenvalue_drift) + "," + fmt17(p.determinant_drift) + "\n";
    }
    write_file(output, csv);
    return kExitOk;
}

int cmd_verify(const std::string& input, std::size_t n, std::uint64_t seed,
               const std::string& output, double tol_scale) {
    VerblunskyCoefficients v = input.empty() ? seeded_alphas(n, seed)
                                             : coefficients_from_json(read_file(input));
    BracketReport eq = verify_bracket_equality(v);
    BracketReport tm = theta_mu_brackets(v);

    BracketReport extra;
    CMVMatrix c = build_cmv(v);
    {  // round-trip and cross-integrator residuals as verification identities
        VerblunskyCoefficients back = verblunsky_of_measure(measure_of(c));
        double rt = 0.0;
        for (std::size_t k = 0; k < v.n(); ++k)
            rt = std::max(rt, std::abs(back.alpha(k) - v.alpha(k)));
        extra.identities.push_back({"measure round trip", rt, 1e-9});
        if (v.n() >= 2) {
            HierarchyHamiltonian h{{cplx{0.0, 0.0}, cplx{1.0, 0.0}}};
            cvector a = flow_qr(c, h, 0.5).coefficients->alphas();
            cvector b = flow_measure(c, h, 0.5).coefficients->alphas();
            double diff = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k)
                diff = std::max(diff, std::abs(a[k] - b[k]));
            extra.identities.push_back({"integrator agreement f=z t=0.5", diff, 1e-8});
            MassBracketCheck mb = mass_brackets(v, 0, v.n() - 1);
            extra.identities.push_back(
                {"mass bracket closed form", std::abs(mb.fd_value - mb.closed_form), 1e-4});
        }
        for (const IdentityResidual& r : extra.identities)
            extra.max_residual = std::max(extra.max_residual, r.residual);
    }

    for (BracketReport* rep : {&eq, &tm, &extra})
        for (IdentityResidual& r : rep->identities) r.tolerance *= tol_scale;
    json out{{"bracket_equality", report_json(eq)},
             {"canonical_relations", report_json(tm)},
             {"cross_checks", report_json(extra)}};
    const bool ok = eq.all_pass() && tm.all_pass() && extra.all_pass();
    out["all_pass"] = ok;
    if (!output.empty()) write_file(output, out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return ok ? kExitOk : kExitNumerical;
}

int cmd_scatter(const std::string& input, const std::string& coeffs, const std::string& output) {
    SpectralMeasure m = measure_from_json(read_file(input));
    HierarchyHamiltonian h = parse_hamiltonian(coeffs);
    ScatteringReport rep = scattering_invariants(m, h);
    json out;
    out["alpha_plus"] = json::array();
    out["alpha_minus"] = json::array();
    out["xi"] = json::array();
    out["zeta"] = json::array();
    for (std::size_t k = 0; k + 1 < m.n(); ++k) {
        out["alpha_plus"].push_back({rep.alpha_plus[k].real(), rep.alpha_plus[k].imag()});
        out["alpha_minus"].push_back({rep.alpha_minus[k].real(), rep.alpha_minus[k].imag()});
        out["xi"].push_back({rep.xi[k].real(), rep.xi[k].imag()});
        out["zeta"].push_back({rep.zeta[k].real(), rep.zeta[k].imag()});
    }
    out["residuals"] = {{"product", rep.max_product_residual},
                        {"eigenvalue_recovery", rep.max_eigen_residual},
                        {"xi_zeta", rep.max_xi_zeta_residual}};
    if (!output.empty()) write_file(output, out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_jacobian(const std::string& input, const std::string& output) {
    VerblunskyCoefficients v = coefficients_from_json(read_file(input));
    JacobianCheck jc = jacobian_check(v);
    json out{{"numeric_det", jc.numeric_det},
             {"closed_form", jc.closed_form},
             {"relative_error",
              std::abs(jc.numeric_det - jc.closed_form) / std::abs(jc.closed_form)}};
    if (!output.empty()) write_file(output, out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int run_self_test() {
    struct Case {
        std::size_t n;
        std::uint64_t seed;
    };
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, double residual) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " (max residual " << residual
                  << ")\n";
        if (!ok) failures++;
    };
    for (Case tc : {Case{3, 11}, Case{4, 12}, Case{5, 13}}) {
        const std::string tag = "n=" + std::to_string(tc.n) + " seed=" + std::to_string(tc.seed);
        VerblunskyCoefficients v = seeded_alphas(tc.n, tc.seed);
        BracketReport eq = verify_bracket_equality(v);
        report("bracket equality " + tag, eq.all_pass(), eq.max_residual);
        BracketReport tm = theta_mu_brackets(v);
        report("canonical relations " + tag, tm.all_pass(), tm.max_residual);
        CMVMatrix c = build_cmv(v);
        VerblunskyCoefficients back = verblunsky_of_measure(measure_of(c));
        double rt = 0.0;
        for (std::size_t k = 0; k < tc.n; ++k)
            rt = std::max(rt, std::abs(back.alpha(k) - v.alpha(k)));
        report("round trip " + tag, rt < 1e-9, rt);
        HierarchyHamiltonian h{{cplx{0.0, 0.0}, cplx{1.0, 0.0}}};
        cvector a = flow_qr(c, h, 1.0).coefficients->alphas();
        cvector b = flow_measure(c, h, 1.0).coefficients->alphas();
        cvector d = flow_ode(c, h, 1.0, 4000).coefficients->alphas();
        double diff = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            diff = std::max({diff, std::abs(a[k] - b[k]), std::abs(a[k] - d[k])});
        report("triple integrator agreement " + tag, diff < 1e-7, diff);
        MassBracketCheck mb = mass_brackets(v, 0, tc.n - 1);
        report("mass brackets " + tag, std::abs(mb.fd_value - mb.closed_form) < 1e-4,
               std::abs(mb.fd_value - mb.closed_form));
        JacobianCheck jc = jacobian_check(v);
        const double rel = std::abs(jc.numeric_det - jc.closed_form) / std::abs(jc.closed_form);
        report("jacobian " + tag, rel < 1e-5, rel);
    }
    std::cout << (failures == 0 ? "self-test passed\n" : "self-test FAILED\n");
    return failures == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CMV matrices, spectral measures, and Ablowitz-Ladik flows"};
    app.require_subcommand(0, 1);

    bool self_test = false;
    app.add_flag("--self-test", self_test, "run the built-in seeded verification suite");

    std::string input, output, conj_path, coeffs = "0,1", integrator = "measure";
    double t0 = 0.0, t1 = 1.0, tol = 1.0;
    std::size_t steps = 100, n = 4;
    std::uint64_t seed = 1;
    bool invert = false;

    auto* b = app.add_subcommand("build", "coefficients JSON -> matrix JSON + shape report");
    b->add_option("--input", input)->required();
    b->add_option("--output", output)->required();
    b->add_option("--tol", tol, "shape-check tolerance scale");

    auto* r = app.add_subcommand("reduce", "unitary matrix JSON -> CMV (or block list)");
    r->add_option("--input", input)->required();
    r->add_option("--output", output)->required();
    r->add_option("--conjugator", conj_path);

    auto* me = app.add_subcommand("measure", "CMV matrix <-> spectral measure");
    me->add_option("--input", input)->required();
    me->add_option("--output", output)->required();
    me->add_flag("--invert", invert, "measure JSON -> CMV matrix JSON");

    auto* fl = app.add_subcommand("flow", "hierarchy flow -> trajectory CSV");
    fl->add_option("--input", input)->required();
    fl->add_option("--output", output)->required();
    fl->add_option("--f-coeffs", coeffs, "polynomial coefficients c0,c1,... (re+imi literals)");
    fl->add_option("--t0", t0);
    fl->add_option("--t1", t1);
    fl->add_option("--steps", steps);
    fl->add_option("--integrator", integrator, "measure | qr | ode");

    auto* ve = app.add_subcommand("verify", "bracket/identity verification report");
    ve->add_option("--input", input);
    ve->add_option("--n", n);
    ve->add_option("--seed", seed);
    ve->add_option("--output", output);
    ve->add_option("--tol", tol, "identity tolerance scale");

    auto* sc = app.add_subcommand("scatter", "scattering report from a measure");
    sc->add_option("--input", input)->required();
    sc->add_option("--f-coeffs", coeffs);
    sc->add_option("--output", output);

    auto* ja = app.add_subcommand("jacobian", "numeric vs closed-form Jacobian");
    ja->add_option("--input", input)->required();
    ja->add_option("--output", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (self_test) return run_self_test();
        if (b->parsed()) return cmd_build(input, output, tol);
        if (r->parsed()) return cmd_reduce(input, output, conj_path);
        if (me->parsed()) return cmd_measure(input, output, invert);
        if (fl->parsed()) return cmd_flow(input, output, coeffs, t0, t1, steps, integrator);
        if (ve->parsed()) return cmd_verify(input, n, seed, output, tol);
        if (sc->parsed()) return cmd_scatter(input, coeffs, output);
        if (ja->parsed()) return cmd_jacobian(input, output);
        std::cout << app.help();
        return kExitOk;
    } catch (const io_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
