// meroform: exact partial-fraction decomposition of closed meromorphic
// 1-forms, residue cross-checks, and jet-level finite-determinacy tools.

#include <CLI11.hpp>

#include <chrono>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "meroform/contour.hpp"
#include "meroform/decompose.hpp"
#include "meroform/determinacy.hpp"
#include "meroform/parse.hpp"
#include "meroform/report.hpp"
#include "meroform/residue.hpp"

using namespace meroform;

namespace {

struct CommonOpts {
    std::string input;
    int order = 10;
    std::uint64_t seed = 0;
    std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOpts& o)
{
    cmd->add_option("--input", o.input, "problem file")->required();
    cmd->add_option("--order", o.order, "jet/truncation order")->default_val(10);
    cmd->add_option("--seed", o.seed, "seed for randomized checks")->default_val(0);
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->default_val("text");
}

struct LoadedProblem {
    ProblemFile pf;
    std::string digest;
};

LoadedProblem load_problem(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parse_error(0, 0, "cannot open input file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    return LoadedProblem{parse_problem(bytes), fnv1a64_hex(bytes)};
}

std::string rationals_to_json_entry(const Rational& q) { return to_string(q); }

Json lambdas_json(const std::vector<Rational>& ls)
{
    Json arr = Json::array();
    for (const auto& l : ls)
        arr.push_back(rationals_to_json_entry(l));
    return arr;
}

Json two_form_json(const TwoForm& w, const std::vector<std::string>& vars)
{
    Json obj = Json::object();
    for (const auto& [jk, p] : w.coeffs())
        obj["d" + vars[jk.first] + "^d" + vars[jk.second]] = p.to_string(vars);
    return obj;
}

std::string monomial_to_string(const Monomial& m, const std::vector<std::string>& vars)
{
    return Poly::from_term(m, Rational(1)).to_string(vars);
}

Json decomposition_json(const Decomposition& d, const SolveReport& rep,
                        const std::vector<std::string>& vars)
{
    Json res = Json::object();
    res["status"] = to_string(rep.status);
    res["lambdas"] = lambdas_json(d.lambdas);
    res["G"] = d.G.poly().to_string(vars);
    res["G_order"] = d.G.order();
    res["G_suspected_polynomial"] = d.g_suspected_polynomial;
    res["normalization_monomial"] = monomial_to_string(d.normalization_monomial, vars);
    res["valid_order"] = d.valid_order;
    res["equations"] = rep.equations;
    res["unknowns"] = rep.unknowns;
    res["lambda_stable_from_order"] = rep.lambda_stable_from_order;
    return res;
}

Json failed_solve_json(const SolveReport& rep)
{
    Json res = Json::object();
    res["status"] = to_string(rep.status);
    res["equations"] = rep.equations;
    res["unknowns"] = rep.unknowns;
    res["diagnostic"] = rep.diagnostic;
    return res;
}

int emit(Report& report, const CommonOpts& opts,
         std::chrono::steady_clock::time_point t0, int exit_code)
{
    report.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    std::cout << render_report(report,
                               opts.format == "json" ? ReportFormat::json
                                                     : ReportFormat::text);
    return exit_code;
}

std::vector<std::complex<double>> default_transversal(const Poly& f,
                                                      const OraclePoint& pt)
{
    if (pt.transversal)
        return *pt.transversal;
    // conjugate gradient direction, normalized
    std::vector<std::complex<double>> v(f.nvars());
    double norm = 0.0;
    for (int k = 0; k < f.nvars(); ++k) {
        v[k] = std::conj(f.derivative(k).evaluate(pt.coords));
        norm += std::norm(v[k]);
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12)
        throw math_error("cannot pick a transversal: gradient vanishes at the point");
    for (auto& c : v)
        c /= norm;
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact residue decomposition of closed meromorphic 1-forms"};
    app.require_subcommand(1);

    CommonOpts opts;
    int line_trials = 50;
    int pencil_samples = 10;
    int component = 1;
    double radius = 0.05;
    int quad_points = 512;
    int max_k = 12;
    int k_override = -1;

    CLI::App* cmd_decompose = app.add_subcommand("decompose", "solve for residues and G");
    add_common(cmd_decompose, opts);
    CLI::App* cmd_closed = app.add_subcommand("check-closed", "test d(omega) = 0 exactly");
    add_common(cmd_closed, opts);
    CLI::App* cmd_verify = app.add_subcommand("verify", "decompose, re-synthesize, compare");
    add_common(cmd_verify, opts);
    CLI::App* cmd_exact = app.add_subcommand("is-exact", "test for a meromorphic primitive");
    add_common(cmd_exact, opts);
    CLI::App* cmd_residues =
        app.add_subcommand("residues", "line and pencil residue cross-checks");
    add_common(cmd_residues, opts);
    cmd_residues->add_option("--line-trials", line_trials, "random lines to test")
        ->default_val(50);
    cmd_residues->add_option("--pencil-samples", pencil_samples, "pencil planes to test")
        ->default_val(10);
    CLI::App* cmd_oracle = app.add_subcommand("oracle", "numeric contour-integration residue");
    add_common(cmd_oracle, opts);
    cmd_oracle->add_option("--component", component, "pole component, 1-based")
        ->default_val(1);
    cmd_oracle->add_option("--radius", radius, "loop radius")->default_val(0.05);
    cmd_oracle->add_option("--points", quad_points, "quadrature nodes")->default_val(512);
    CLI::App* cmd_det =
        app.add_subcommand("determinacy", "finite-determinacy bound of the pole product");
    add_common(cmd_det, opts);
    cmd_det->add_option("--max-k", max_k, "largest k to try")->default_val(12);
    CLI::App* cmd_norm =
        app.add_subcommand("normalize", "conjugate the pole product to its finite jet");
    add_common(cmd_norm, opts);
    cmd_norm->add_option("--max-k", max_k, "largest k to try")->default_val(12);
    cmd_norm->add_option("--k", k_override, "skip the bound search and use this k");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    Report report;

    try {
        LoadedProblem lp = load_problem(opts.input);
        const ProblemFile& pf = lp.pf;
        report.input_digest = lp.digest;
        const std::vector<std::string>& vars = pf.vars;

        if (*cmd_decompose) {
            report.command = "decompose";
            MeroOneForm w = pf.form();
            DecomposeResult r = decompose(w, opts.order);
            if (!r.solved()) {
                report.result = failed_solve_json(r.report);
                return emit(report, opts, t0, 1);
            }
            report.result = decomposition_json(*r.decomposition, r.report, vars);
            return emit(report, opts, t0, 0);
        }

        if (*cmd_closed) {
            report.command = "check-closed";
            ClosednessResult c = closedness_check(pf.form());
            report.result["verdict"] = c.closed ? "closed" : "not_closed";
            if (c.checked_to)
                report.result["checked_to"] = *c.checked_to;
            else
                report.result["checked_to"] = "exact";
            if (!c.closed)
                report.result["witness"] = two_form_json(c.witness, vars);
            return emit(report, opts, t0, c.closed ? 0 : 1);
        }

        if (*cmd_verify) {
            report.command = "verify";
            MeroOneForm w = pf.form();
            DecomposeResult r = decompose(w, opts.order);
            if (!r.solved()) {
                report.result = failed_solve_json(r.report);
                return emit(report, opts, t0, 1);
            }
            SolveReport vr = verify_decomposition(w, *r.decomposition);
            report.result = decomposition_json(*r.decomposition, r.report, vars);
            report.result["verification"] = to_string(vr.status);
            report.result["residual_zero"] = vr.residual.is_zero();
            bool ok = vr.status == SolveStatus::solved;
            if (pf.expected_lambdas) {
                bool match = *pf.expected_lambdas == r.decomposition->lambdas;
                report.result["expected_lambdas_match"] = match;
                ok = ok && match;
            }
            if (pf.expected_g) {
                // compare modulo the normalization: both normalized against F
                Poly f_red = w.divisor.reduced_product();
                Poly expected_norm =
                    detail::normalize_against(*pf.expected_g, f_red,
                                              r.decomposition->normalization_monomial,
                                              opts.order)
                        .truncated(opts.order);
                bool match = expected_norm == r.decomposition->G.poly();
                report.result["expected_g_match"] = match;
                ok = ok && match;
            }
            return emit(report, opts, t0, ok ? 0 : 1);
        }

        if (*cmd_exact) {
            report.command = "is-exact";
            MeroOneForm w = pf.form();
            ExactnessResult r = is_exact_form(w, opts.order);
            report.result["verdict"] = r.exact ? "exact" : "not_exact";
            report.result["lambdas"] = lambdas_json(r.decomposition.lambdas);
            if (r.exact) {
                report.result["primitive_numerator"] = r.decomposition.G.poly().to_string(vars);
                report.result["primitive_denominator"] =
                    w.divisor.reduced_product().to_string(vars);
            }
            return emit(report, opts, t0, 0);
        }

        if (*cmd_residues) {
            report.command = "residues";
            MeroOneForm w = pf.form();
            DecomposeResult r = decompose(w, opts.order);
            if (!r.solved()) {
                report.result = failed_solve_json(r.report);
                return emit(report, opts, t0, 1);
            }
            report.result["lambdas"] = lambdas_json(r.decomposition->lambdas);
            bool ok = true;

            LineCheckReport lines =
                line_multiplicity_check(w, *r.decomposition, line_trials, opts.seed);
            Json lj = Json::object();
            lj["expected_line_residue"] = to_string(lines.expected);
            lj["usable"] = lines.usable;
            lj["degenerate_skipped"] =
                static_cast<int>(lines.samples.size()) - lines.usable;
            lj["failures"] = lines.failures;
            lj["all_match"] = lines.all_match();
            report.result["line_check"] = lj;
            ok = ok && lines.all_match();

            if (w.nvars() >= 3) {
                PencilReport pencil =
                    pencil_constancy_check(w, pencil_samples, opts.seed + 1, opts.order);
                Json pj = Json::object();
                pj["samples"] = static_cast<int>(pencil.samples.size());
                pj["usable"] = pencil.usable;
                pj["constant"] = pencil.constant;
                bool match_global = pencil.constant;
                for (const auto& s : pencil.samples)
                    if (s.status == SampleStatus::ok &&
                        s.lambdas != r.decomposition->lambdas) {
                        match_global = false;
                        break;
                    }
                pj["matches_global"] = match_global;
                report.result["pencil_check"] = pj;
                ok = ok && pencil.constant && match_global;
            }
            return emit(report, opts, t0, ok ? 0 : 1);
        }

        if (*cmd_oracle) {
            report.command = "oracle";
            MeroOneForm w = pf.form();
            if (component < 1 || component > w.divisor.count())
                throw math_error("oracle: --component out of range");
            if (pf.points.empty())
                throw math_error("oracle: the problem file provides no point lines");
            Json arr = Json::array();
            int skipped = 0;
            for (const auto& pt : pf.points) {
                // points may belong to other components; use only those on
                // the selected one
                if (std::abs(w.divisor.component(component - 1).f.evaluate(pt.coords)) >=
                    1e-12) {
                    ++skipped;
                    continue;
                }
                ContourSpec spec;
                spec.component = component - 1;
                spec.point = pt.coords;
                spec.transversal =
                    default_transversal(w.divisor.component(component - 1).f, pt);
                spec.radius = radius;
                spec.points = quad_points;
                ContourEstimate est = numeric_contour_residue(w, spec);
                Json pj = Json::object();
                pj["estimate_re"] = est.value.real();
                pj["estimate_im"] = est.value.imag();
                pj["doubling_delta"] = est.doubling_delta;
                pj["points_used"] = est.points_used;
                if (pf.expected_lambdas) {
                    Rational exact = (*pf.expected_lambdas)[component - 1];
                    double ex = numerator_of(exact).convert_to<double>() /
                                denominator_of(exact).convert_to<double>();
                    pj["abs_error"] = std::abs(est.value - std::complex<double>(ex, 0.0));
                }
                arr.push_back(pj);
            }
            if (arr.empty())
                throw math_error("oracle: no supplied point lies on component " +
                                 std::to_string(component));
            report.result["component"] = component;
            report.result["points_skipped"] = skipped;
            report.result["estimates"] = arr;
            return emit(report, opts, t0, 0);
        }

        if (*cmd_det || *cmd_norm) {
            MeroOneForm w = pf.form();
            if (w.nvars() != 2)
                throw math_error("determinacy tools need a two-variable problem");
            Poly g = w.divisor.radical_product();
            if (*cmd_det) {
                report.command = "determinacy";
                auto cert = determinacy_bound(g, max_k);
                report.result["g"] = g.to_string(vars);
                if (cert) {
                    report.result["k"] = cert->k;
                    report.result["checked_order"] = cert->checked_order;
                    report.result["witness_count"] =
                        static_cast<int>(cert->witnesses.size());
                } else {
                    report.result["k"] = "none";
                    report.result["max_k"] = max_k;
                }
                return emit(report, opts, t0, 0);
            }
            report.command = "normalize";
            int k = k_override;
            if (k < 0) {
                auto cert = determinacy_bound(g.truncated(opts.order), max_k);
                if (!cert)
                    throw math_error("normalize: no determinacy bound <= " +
                                     std::to_string(max_k) + "; pass --k to override");
                k = cert->k;
            }
            Jet gj(g, opts.order);
            NormalizeResult nr = normalize_to_finite_jet(gj, k, opts.order);
            bool verified = verify_conjugation(gj, nr.g0, nr.phi, opts.order);
            report.result["k"] = k;
            report.result["g0"] = nr.g0.to_string(vars);
            Json phi = Json::object();
            for (int i = 0; i < 2; ++i)
                phi["phi_" + vars[i]] = nr.phi.component_maps[i].poly().to_string(vars);
            report.result["phi"] = phi;
            report.result["verified"] = verified;
            return emit(report, opts, t0, verified ? 0 : 1);
        }
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const math_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
