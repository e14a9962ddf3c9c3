// Command-line front end: group operations, supermomenta, white-noise operators,
// the constrained dynamics, induced representations and the verification suites.

#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmsfield/bmsgroup.hpp"
#include "bmsfield/config.hpp"
#include "bmsfield/dynamics.hpp"
#include "bmsfield/errors.hpp"
#include "bmsfield/induced.hpp"
#include "bmsfield/serialize.hpp"
#include "bmsfield/supermomenta.hpp"
#include "bmsfield/verify.hpp"
#include "bmsfield/whitenoise.hpp"

using namespace bms;

namespace {

struct Globals {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    bool json_out = false;
};

Config load_config(const Globals& g) {
    Config c;
    if (auto path = resolve_config_path(g.config_path)) c = Config::load(*path);
    if (g.seed) c.seed = *g.seed;
    c.validate();
    return c;
}

json load_json(const std::string& path) { return parse_document(read_text_file(path)); }

// Scalars: "name: value" lines, or one JSON object with --json.
void emit(const Globals& g, const nlohmann::ordered_json& obj) {
    if (g.json_out) {
        std::cout << obj.dump(2) << "\n";
        return;
    }
    for (const auto& [k, v] : obj.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

void emit_document(const json& doc) { std::cout << doc.dump(2) << "\n"; }

cplx parse_complex(const std::string& s) {
    std::stringstream ss(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    bool ok = static_cast<bool>(ss >> re);
    if (ok && ss >> comma) ok = comma == ',' && ss >> im && (ss >> std::ws).eof();
    if (!ok) throw ConfigError("expected a complex number as re[,im], got \"" + s + "\"");
    return {re, im};
}

template <class M>
double max_abs(const M& m) {
    double mx = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (typename M::InnerIterator it(m, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
    return mx;
}

int finish(const Globals& g, const std::string& what, double defect, double tol, bool at_most = true) {
    const bool ok = at_most ? defect <= tol : defect >= tol;
    nlohmann::ordered_json o;
    o["check"] = what;
    o["defect"] = defect;
    o["tolerance"] = tol;
    o["status"] = ok ? "pass" : "fail";
    emit(g, o);
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bmsfield: BMS-invariant scalar fields on white-noise spaces"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON configuration file (overrides $BMSFIELD_CONFIG)");
    app.add_option("--seed", g.seed, "random seed (overrides the configuration)");
    app.add_flag("--json", g.json_out, "machine-readable output");

    int rc = 0;
    auto guarded = [&](auto fn) {
        return [&, fn] { rc = fn(); };
    };

    // ---- bms ----
    auto* bms_cmd = app.add_subcommand("bms", "BMS group elements");
    bms_cmd->require_subcommand(1);
    std::string g1_path, g2_path;
    auto* compose_cmd = bms_cmd->add_subcommand("compose", "print g1 . g2");
    compose_cmd->add_option("--g1", g1_path)->required();
    compose_cmd->add_option("--g2", g2_path)->required();
    compose_cmd->callback(guarded([&] {
        load_config(g);
        emit_document(to_json(compose(bms_element_from_json(load_json(g1_path)), bms_element_from_json(load_json(g2_path)))));
        return 0;
    }));
    std::string g_path;
    double u = 0.0, theta = 0.0, phi = 0.0;
    auto* act_cmd = bms_cmd->add_subcommand("act", "act on a point (u, theta, phi) of null infinity");
    act_cmd->add_option("--g", g_path)->required();
    act_cmd->add_option("--u", u);
    act_cmd->add_option("--theta", theta);
    act_cmd->add_option("--phi", phi);
    act_cmd->callback(guarded([&] {
        load_config(g);
        const ScriPoint out = act_on_scri(bms_element_from_json(load_json(g_path)),
                                          {u, RiemannPoint::from_angles({theta, phi})});
        const SpherePoint a = out.zeta.angles();
        nlohmann::ordered_json o;
        o["u"] = out.u;
        o["theta"] = a.theta;
        o["phi"] = a.phi;
        emit(g, o);
        return 0;
    }));
    int trials = 200;
    auto* cocycle_cmd = bms_cmd->add_subcommand("cocycle-check", "conformal factor cocycle on random triples");
    cocycle_cmd->add_option("--trials", trials);
    cocycle_cmd->callback(guarded([&] {
        const Config c = load_config(g);
        std::mt19937_64 rng(derived_seed(c.seed, "cli/cocycle"));
        std::uniform_real_distribution<double> un(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            const SL2C a = SL2C::random(rng), b = SL2C::random(rng);
            const RiemannPoint z = RiemannPoint::from_angles({std::acos(1.0 - 2.0 * un(rng)), 6.283185307179586 * un(rng)});
            const double rhs = conformal_factor(b * a, z);
            worst = std::max(worst, std::abs(conformal_factor(b, mobius(a, z)) * conformal_factor(a, z) - rhs) / rhs);
        }
        return finish(g, "cocycle_K", worst, c.tol("cocycle"));
    }));

    // ---- momenta ----
    auto* mom_cmd = app.add_subcommand("momenta", "supermomenta and orbits");
    mom_cmd->require_subcommand(1);
    std::string beta_path;
    auto* casimir_cmd = mom_cmd->add_subcommand("casimir", "four-momentum and mass squared");
    casimir_cmd->add_option("--input", beta_path)->required();
    casimir_cmd->callback(guarded([&] {
        const Config c = load_config(g);
        const Supermomentum beta = supermomentum_from_json(load_json(beta_path));
        const FourMomentum p = project_T4(beta);
        nlohmann::ordered_json o;
        o["four_momentum_txyz"] = p.cartesian();
        o["mass_squared"] = mass_squared(beta, c.signature);
        o["annihilator"] = annihilator_check(beta, c.tol("t4_covariance"));
        emit(g, o);
        return 0;
    }));
    std::string kind = "massive";
    double param = 1.0;
    auto* fixed_cmd = mom_cmd->add_subcommand("fixed-point", "orbit representative supermomentum");
    fixed_cmd->add_option("--kind", kind)->check(CLI::IsMember({"massive", "massless"}));
    fixed_cmd->add_option("--param", param, "mass m or energy E");
    fixed_cmd->callback(guarded([&] {
        const Config c = load_config(g);
        emit_document(to_json(orbit_fixed_point(kind == "massive" ? OrbitKind::massive : OrbitKind::massless, param, c.L_max)));
        return 0;
    }));
    int inv_trials = 500;
    auto* inv_cmd = mom_cmd->add_subcommand("invariance-check", "mass squared under random Lorentz transformations");
    inv_cmd->add_option("--trials", inv_trials);
    inv_cmd->callback(guarded([&] {
        const Config c = load_config(g);
        std::mt19937_64 rng(derived_seed(c.seed, "cli/casimir"));
        const Supermomentum m = orbit_fixed_point(OrbitKind::massive, 1.0, c.L_max);
        double worst = 0.0;
        for (int i = 0; i < inv_trials; ++i)
            worst = std::max(worst, std::abs(mass_squared(dual_act(SL2C::random_lorentz(rng, 2.0), m), c.signature) - 1.0));
        return finish(g, "casimir_massive", worst, c.tol("casimir_mass"));
    }));

    // ---- wn ----
    auto* wn_cmd = app.add_subcommand("wn", "white-noise operators on Hermite series");
    wn_cmd->require_subcommand(1);
    std::string op, psi_path, alpha_path, a_str = "1.4142135623730951", b_str = "0,1", slots_str = "0,1,2,3";
    int slot = -1, out_cap = -1;
    auto* op_cmd = wn_cmd->add_subcommand("op", "apply an operator and print the series");
    op_cmd->add_option("--op", op)->required()->check(CLI::IsMember({"Q", "D", "Dstar", "PiV", "S", "F", "FG"}));
    op_cmd->add_option("--psi", psi_path, "Hermite series JSON")->required();
    op_cmd->add_option("--slot", slot, "direction index for Q, D, Dstar");
    op_cmd->add_option("--alpha", alpha_path, "SphereFunction JSON for Q, D, Dstar");
    op_cmd->add_option("--slots", slots_str, "comma-separated slots for PiV");
    op_cmd->add_option("--out-cap", out_cap, "output cap for F");
    op_cmd->add_option("--a", a_str, "FG parameter a as re[,im]");
    op_cmd->add_option("--b", b_str, "FG parameter b as re[,im]");
    op_cmd->callback(guarded([&] {
        const Config c = load_config(g);
        const HermiteSeries psi = hermite_series_from_json(load_json(psi_path));
        const DegreePolicy pol = c.degree_policy;
        if (op == "Q" || op == "D" || op == "Dstar") {
            HermiteSeries out;
            if (!alpha_path.empty()) {
                const SphereFunction alpha = sphere_function_from_json(load_json(alpha_path));
                out = op == "Q" ? multiply_Q(alpha, psi, pol) : op == "D" ? gateaux_D(alpha, psi) : adjoint_Dstar(alpha, psi, pol);
            } else {
                if (slot < 0 || slot >= psi.K()) throw ConfigError("--slot or --alpha is required and must name a direction");
                out = op == "Q" ? q_slot(slot, psi, pol) : op == "D" ? d_slot(slot, psi) : dstar_slot(slot, psi, pol);
            }
            emit_document(to_json(out));
        } else if (op == "PiV") {
            std::vector<int> v;
            std::stringstream ss(slots_str);
            for (std::string tok; std::getline(ss, tok, ',');) v.push_back(std::stoi(tok));
            emit_document(to_json(project_Pi_V(psi, v)));
        } else if (op == "S") {
            // The S-transform has the same coefficients on the monomial basis.
            const MonomialSeries m = s_transform(psi);
            json j = to_json(HermiteSeries(psi.directions(), psi.cap(), m.coeffs));
            j["basis"] = "monomial";
            emit_document(j);
        } else if (op == "F") {
            const FourierResult f = fourier_F(psi, out_cap < 0 ? psi.cap() : out_cap);
            json j = to_json(f.series);
            j["tail_norm"] = f.tail_norm;
            emit_document(j);
        } else {
            emit_document(to_json(fourier_gauss(parse_complex(a_str), parse_complex(b_str), psi)));
        }
        return 0;
    }));
    std::string which;
    auto* id_cmd = wn_cmd->add_subcommand("identity-check", "operator identities as truncated matrices");
    id_cmd->add_option("--which", which)->required()->check(CLI::IsMember({"DQ", "uno", "due", "multdiff", "fg-inverse"}));
    id_cmd->callback(guarded([&] {
        const Config c = load_config(g);
        const int K = c.directions().size(), N = c.N;
        const auto basis = ChaosBasis::get(K, N);
        const cplx a(std::sqrt(2.0)), b(0.0, 1.0);
        double defect = 0.0;
        std::string key;
        if (which == "DQ") {
            key = "q_identity";
            for (int i = 0; i < K; ++i) {
                const SparseReal d = elementary_matrix(Elementary::Q, i, K, N) - elementary_matrix(Elementary::D, i, K, N) -
                                     elementary_matrix(Elementary::Dstar, i, K, N);
                defect = std::max(defect, max_abs(SparseReal(restrict_degree(d, *basis, N - 1))));
            }
        } else if (which == "uno" || which == "due") {
            key = "fg_intertwining";
            const SparseComplex gm = fourier_gauss_matrix(a, b, K, N);
            for (int i = 0; i < K; ++i) {
                const SparseComplex d = elementary_matrix(Elementary::D, i, K, N).cast<cplx>();
                const SparseComplex q = elementary_matrix(Elementary::Q, i, K, N).cast<cplx>();
                const SparseComplex e = which == "uno" ? SparseComplex(gm * d - (1.0 / b) * SparseComplex(d * gm))
                                                       : SparseComplex(gm * q - (a * a / b) * SparseComplex(d * gm) -
                                                                       b * SparseComplex(q * gm));
                defect = std::max(defect, max_abs(SparseComplex(restrict_degree(e, *basis, N - 1))));
            }
        } else if (which == "fg-inverse") {
            key = "fg_identity";
            SparseComplex id(basis->size(), basis->size());
            id.setIdentity();
            defect = max_abs(SparseComplex(fourier_gauss_matrix(a, b, K, N) * fourier_gauss_matrix(a, -b, K, N) - id));
        } else {
            key = "fourier_intertwining";
            const DirectionSet dirs = c.directions();
            const int n_out = basis->size_up_to(N - 1);
            for (int r = 0; r < basis->size_up_to(N - 2); ++r) {
                HermiteSeries e(dirs, N);
                e.coeffs()[r] = 1.0;
                const HermiteSeries fe = fourier_F(e, N).series;
                for (int i = 0; i < K; ++i) {
                    const HermiteSeries l = fourier_F(d_slot(i, e), N).series;
                    const HermiteSeries rr = cplx(0.0, 1.0) * q_slot(i, fe, DegreePolicy::grow).truncated(N);
                    defect = std::max(defect, (l.coeffs() - rr.coeffs()).head(n_out).cwiseAbs().maxCoeff());
                }
            }
        }
        return finish(g, which, defect, c.tol(key));
    }));

    // ---- dyn ----
    auto* dyn_cmd = app.add_subcommand("dyn", "constrained Klein-Gordon dynamics");
    dyn_cmd->require_subcommand(1);
    std::string state_path;
    double m2 = 1.0;
    auto add_state_cmd = [&](const char* name, const char* help) {
        auto* s = dyn_cmd->add_subcommand(name, help);
        s->add_option("--state", state_path)->required();
        s->add_option("--m2", m2);
        return s;
    };
    add_state_cmd("lagrangian", "L, L_KG and the multiplier term")->callback(guarded([&] {
        const Config c = load_config(g);
        const FieldState s = field_state_from_json(load_json(state_path));
        nlohmann::ordered_json o;
        o["lagrangian"] = lagrangian_full(s, m2, c.signature);
        o["lagrangian_KG"] = lagrangian_KG(s.psi, m2, c.signature);
        o["multiplier_term"] = multiplier_term(s.psi, s.lambdas);
        emit(g, o);
        return 0;
    }));
    add_state_cmd("gradient-check", "analytic gradient against central differences")->callback(guarded([&] {
        const Config c = load_config(g);
        const FieldState s = field_state_from_json(load_json(state_path));
        const HermiteSeries grad = euler_lagrange_gradient(s, m2, c.signature);
        const ChaosBasis& basis = s.psi.basis();
        Eigen::VectorXd fd(basis.size()), an(basis.size());
        const double h = 1e-5;
        for (int r = 0; r < basis.size(); ++r) {
            HermiteSeries e(s.psi.directions(), s.psi.cap());
            e.coeffs()[r] = 1.0;
            const HermiteSeries de = d_slot(0, e);
            FieldState p = s, q = s;
            p.psi += h * e;
            p.v += h * de;
            q.psi -= h * e;
            q.v -= h * de;
            fd[r] = (lagrangian_full(p, m2, c.signature) - lagrangian_full(q, m2, c.signature)) / (2.0 * h) / basis.weight(r);
            an[r] = grad.coeffs()[r].real();
        }
        const double rel = an.norm() > 0 ? (fd - an).norm() / an.norm() : (fd - an).norm();
        return finish(g, "el_gradient", rel, c.tol("el_gradient"));
    }));
    add_state_cmd("hamiltonian", "energy and Hamiltonian at the state")->callback(guarded([&] {
        const Config c = load_config(g);
        const FieldState s = field_state_from_json(load_json(state_path));
        nlohmann::ordered_json o;
        o["energy"] = energy(s, m2, c.signature);
        o["hamiltonian"] = hamiltonian(fiber_derivative(s), m2, c.signature);
        emit(g, o);
        return 0;
    }));
    add_state_cmd("legendre-check", "H o FL = E")->callback(guarded([&] {
        const Config c = load_config(g);
        const FieldState s = field_state_from_json(load_json(state_path));
        const double e = energy(s, m2, c.signature);
        const double h = hamiltonian(fiber_derivative(s), m2, c.signature);
        return finish(g, "legendre_consistency", std::abs(h - e) / std::max(1.0, std::abs(e)), c.tol("legendre"));
    }));
    add_state_cmd("symplectic-rank", "rank of the symplectic Gram matrix on the state's truncation")->callback(guarded([&] {
        const Config c = load_config(g);
        const FieldState s = field_state_from_json(load_json(state_path));
        const auto [rank, dim] = symplectic_rank(s.psi.directions(), s.psi.cap());
        return finish(g, "symplectic_full_rank", static_cast<double>(dim - rank), c.tol("counterexamples"));
    }));

    // ---- induced ----
    auto* ind_cmd = app.add_subcommand("induced", "induced wave functions on orbits");
    ind_cmd->require_subcommand(1);
    double chi_max = 2.0;
    int n_chi = 40, n_sphere = 20;
    auto* orbit_cmd = ind_cmd->add_subcommand("build-orbit", "print an orbit quadrature description");
    orbit_cmd->add_option("--kind", kind)->check(CLI::IsMember({"massive", "massless"}));
    orbit_cmd->add_option("--param", param);
    orbit_cmd->add_option("--chi-max", chi_max);
    orbit_cmd->add_option("--n-chi", n_chi);
    orbit_cmd->add_option("--n-sphere", n_sphere);
    orbit_cmd->callback(guarded([&] {
        load_config(g);
        emit_document(to_json(build_orbit(kind == "massive" ? OrbitKind::massive : OrbitKind::massless, param, chi_max,
                                          n_chi, n_sphere)));
        return 0;
    }));
    std::string phi_path;
    bool zero_ext = false;
    auto* iact_cmd = ind_cmd->add_subcommand("act", "apply a BMS element to an induced field");
    iact_cmd->add_option("--g", g_path)->required();
    iact_cmd->add_option("--phi", phi_path)->required();
    iact_cmd->add_flag("--zero-extension", zero_ext, "treat nodes mapped outside the window as zero");
    iact_cmd->callback(guarded([&] {
        load_config(g);
        const BMSElement el = bms_element_from_json(load_json(g_path));
        OrbitField f = orbit_field_from_json(load_json(phi_path));
        f.field = induced_act(el, f.field, f.orbit, zero_ext ? EscapePolicy::zero_extension : EscapePolicy::error);
        emit_document(to_json(f));
        return 0;
    }));
    int refine = -1;
    auto* unit_cmd = ind_cmd->add_subcommand("unitarity-check", "norm drift under translations and a boost");
    unit_cmd->add_option("--refine", refine);
    unit_cmd->callback(guarded([&] {
        const Config c = load_config(g);
        const UnitarityReport r = unitarity_check(c.boost_rapidity, c.induced_n_chi, c.induced_n_sphere,
                                                  refine < 0 ? c.induced_refine : refine);
        nlohmann::ordered_json o;
        o["phase_drift"] = r.phase_drift;
        o["st_drift"] = r.st_drift;
        o["boost_drift"] = r.boost_drift;
        o["refined_drift"] = r.refined_drift;
        o["improvement"] = r.improvement;
        const bool ok = r.phase_drift <= c.tol("induced_phase") && r.st_drift <= c.tol("induced_phase") &&
                        r.boost_drift <= c.tol("boost_norm") && r.improvement >= c.tol("refinement_gain");
        o["status"] = ok ? "pass" : "fail";
        emit(g, o);
        return ok ? 0 : 1;
    }));

    // ---- verify / roundtrip ----
    std::string suite = "all";
    auto* ver_cmd = app.add_subcommand("verify", "run a verification suite");
    ver_cmd->add_option("suite", suite)->check(CLI::IsMember(suite_names()));
    ver_cmd->callback(guarded([&] {
        const Config c = load_config(g);
        const VerificationReport rep = run_suite(suite, c);
        std::cout << (g.json_out ? rep.to_json() + "\n" : rep.table());
        return rep.passed() ? 0 : 1;
    }));
    std::string rt_path;
    auto* rt_cmd = app.add_subcommand("roundtrip", "parse, serialize and re-parse a JSON document");
    rt_cmd->add_option("path", rt_path)->required();
    rt_cmd->callback(guarded([&] {
        load_config(g);
        const bool ok = roundtrip(rt_path);
        nlohmann::ordered_json o;
        o["path"] = rt_path;
        o["identical"] = ok;
        emit(g, o);
        return ok ? 0 : 1;
    }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "schema error at " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
