#include "bmsfield/serialize.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bmsfield/errors.hpp"

namespace bms {

namespace {

// A json node together with its path, for error messages.
struct Node {
    const json& j;
    std::string path;

    Node at(const char* key) const {
        if (!j.is_object()) throw SchemaError(path, "expected an object");
        auto it = j.find(key);
        if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
        return {*it, path + "." + key};
    }
    Node item(std::size_t i) const { return {j[i], path + "[" + std::to_string(i) + "]"}; }
    bool has(const char* key) const { return j.is_object() && j.contains(key); }

    const json& array() const {
        if (!j.is_array()) throw SchemaError(path, "expected an array");
        return j;
    }
    double number() const {
        if (!j.is_number()) throw SchemaError(path, "expected a number");
        return j.get<double>();
    }
    int integer() const {
        if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
        return j.get<int>();
    }
    std::string string() const {
        if (!j.is_string()) throw SchemaError(path, "expected a string");
        return j.get<std::string>();
    }
    std::vector<double> numbers() const {
        array();
        std::vector<double> out(j.size());
        for (std::size_t i = 0; i < j.size(); ++i) out[i] = item(i).number();
        return out;
    }
};

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }
bool same_bits(cplx a, cplx b) { return same_bits(a.real(), b.real()) && same_bits(a.imag(), b.imag()); }

template <class Range>
bool same_bits_range(const Range& a, const Range& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < static_cast<std::size_t>(a.size()); ++i)
        if (!same_bits(a[i], b[i])) return false;
    return true;
}

bool same_bits(const HermiteSeries& a, const HermiteSeries& b) {
    return a.directions() == b.directions() && a.cap() == b.cap() && same_bits_range(a.coeffs(), b.coeffs());
}
bool same_bits(const SL2C& a, const SL2C& b) {
    return same_bits(a.a(), b.a()) && same_bits(a.b(), b.b()) && same_bits(a.c(), b.c()) && same_bits(a.d(), b.d());
}
template <class D>
bool same_bits(const HarmonicCoefficients<D>& a, const HarmonicCoefficients<D>& b) {
    return a.lmax() == b.lmax() && same_bits_range(a.coeffs(), b.coeffs());
}
bool same_bits(const std::vector<HermiteSeries>& a, const std::vector<HermiteSeries>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_bits(a[i], b[i])) return false;
    return true;
}
bool same_bits(const OrbitQuadrature& a, const OrbitQuadrature& b) {
    return a.kind == b.kind && same_bits(a.param, b.param) && same_bits(a.chi_max, b.chi_max) && a.n_chi == b.n_chi &&
           a.n_theta == b.n_theta && a.n_phi == b.n_phi;
}

template <class T>
json harmonic_to_json(const T& f) {
    json c = json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto [l, m] = harmonic_lm(static_cast<int>(i));
        if (!std::isfinite(f[i])) throw SchemaError("$.coeffs", "non-finite coefficient");
        c.push_back(json::array({l, m, f[i]}));
    }
    return {{"L_max", f.lmax()}, {"coeffs", c}};
}

template <class T>
T harmonic_from(const Node& n) {
    const int lmax = n.at("L_max").integer();
    if (lmax < 0) throw SchemaError(n.path + ".L_max", "must be non-negative");
    T f(lmax);
    std::vector<bool> seen(f.size(), false);
    const Node c = n.at("coeffs");
    c.array();
    for (std::size_t i = 0; i < c.j.size(); ++i) {
        const Node e = c.item(i);
        if (!e.j.is_array() || e.j.size() != 3) throw SchemaError(e.path, "expected [l, m, value]");
        const int l = e.item(0).integer(), m = e.item(1).integer();
        if (l < 0 || l > lmax || m < -l || m > l) throw SchemaError(e.path, "(l, m) outside the truncation");
        const auto idx = static_cast<std::size_t>(harmonic_index(l, m));
        if (seen[idx]) throw SchemaError(e.path, "duplicate (l, m)");
        seen[idx] = true;
        f[idx] = e.item(2).number();
    }
    return f;
}

json complex_pair(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw SchemaError("$", "non-finite value");
    return json::array({z.real(), z.imag()});
}

cplx read_complex(const Node& n) {
    if (!n.j.is_array() || n.j.size() != 2) throw SchemaError(n.path, "expected [re, im]");
    return {n.item(0).number(), n.item(1).number()};
}

json orbit_to_json(const OrbitQuadrature& o) {
    return {{"kind", o.kind == OrbitKind::massive ? "massive" : "massless"},
            {"param", o.param},
            {"chi_max", o.chi_max},
            {"n_chi", o.n_chi},
            {"n_sphere", o.n_theta}};
}

} // namespace

json to_json(const SphereFunction& f) { return harmonic_to_json(f); }

json to_json(const Supermomentum& beta) {
    json j = harmonic_to_json(beta);
    j["dual"] = true;
    return j;
}

json to_json(const BMSElement& g) {
    const SL2C& l = g.lambda;
    return {{"lambda", json::array({complex_pair(l.a()), complex_pair(l.b()), complex_pair(l.c()), complex_pair(l.d())})},
            {"f", to_json(g.f)}};
}

json to_json(const HermiteSeries& psi) {
    const ChaosBasis& basis = psi.basis();
    json c = json::array();
    for (int r = 0; r < basis.size(); ++r) {
        const auto n = basis.index(r);
        const json z = complex_pair(psi.coeffs()[r]);
        c.push_back(json::array({std::vector<int>(n.begin(), n.end()), z[0], z[1]}));
    }
    return {{"N", psi.cap()}, {"directions", psi.directions().all()}, {"k", psi.directions().k()}, {"coeffs", c}};
}

json to_json(const FieldState& s) {
    json l = json::array(), lv = json::array();
    for (const auto& x : s.lambdas) l.push_back(to_json(x));
    for (const auto& x : s.lambda_vs) lv.push_back(to_json(x));
    return {{"psi", to_json(s.psi)}, {"v", to_json(s.v)}, {"lambdas", l}, {"lambda_vs", lv}};
}

json to_json(const OrbitQuadrature& o) { return orbit_to_json(o); }

json to_json(const OrbitField& f) {
    json v = json::array();
    for (const cplx& z : f.field.values) v.push_back(complex_pair(z));
    return {{"orbit", orbit_to_json(f.orbit)}, {"values", v}};
}

SphereFunction sphere_function_from_json(const json& j, const std::string& path) {
    const Node n{j, path};
    if (n.has("dual")) {
        const Node d = n.at("dual");
        if (!d.j.is_boolean() || d.j.get<bool>()) throw SchemaError(d.path, "a function has no dual flag (or false)");
    }
    return harmonic_from<SphereFunction>(n);
}

Supermomentum supermomentum_from_json(const json& j, const std::string& path) {
    const Node n{j, path};
    const Node d = n.at("dual");
    if (!d.j.is_boolean() || !d.j.get<bool>()) throw SchemaError(d.path, "expected true");
    return harmonic_from<Supermomentum>(n);
}

BMSElement bms_element_from_json(const json& j, const std::string& path) {
    const Node n{j, path};
    const Node l = n.at("lambda");
    if (!l.j.is_array() || l.j.size() != 4) throw SchemaError(l.path, "expected four [re, im] entries");
    SL2C lam;
    try {
        lam = SL2C::exact(read_complex(l.item(0)), read_complex(l.item(1)), read_complex(l.item(2)), read_complex(l.item(3)));
    } catch (const DomainError& e) {
        throw SchemaError(l.path, e.what());
    }
    return {lam, sphere_function_from_json(n.at("f").j, path + ".f")};
}

HermiteSeries hermite_series_from_json(const json& j, const std::string& path) {
    const Node n{j, path};
    const int cap = n.at("N").integer();
    if (cap < 0) throw SchemaError(path + ".N", "must be non-negative");
    const double k = n.at("k").number();
    const Node d = n.at("directions");
    d.array();
    std::vector<std::pair<int, int>> lm;
    for (std::size_t i = 0; i < d.j.size(); ++i) {
        const Node e = d.item(i);
        if (!e.j.is_array() || e.j.size() != 2) throw SchemaError(e.path, "expected [l, m]");
        lm.emplace_back(e.item(0).integer(), e.item(1).integer());
    }
    const std::vector<std::pair<int, int>> t4{{0, 0}, {1, -1}, {1, 0}, {1, 1}};
    if (lm.size() < 4 || !std::equal(t4.begin(), t4.end(), lm.begin()))
        throw SchemaError(d.path, "must start with [0,0], [1,-1], [1,0], [1,1]");
    std::optional<DirectionSet> dirs;
    try {
        dirs.emplace(std::vector<std::pair<int, int>>(lm.begin() + 4, lm.end()), k);
    } catch (const std::exception& e) {
        throw SchemaError(path, e.what());
    }
    HermiteSeries psi(*dirs, cap);
    const ChaosBasis& basis = psi.basis();
    std::vector<bool> seen(static_cast<std::size_t>(basis.size()), false);
    const Node c = n.at("coeffs");
    c.array();
    std::vector<int> idx(static_cast<std::size_t>(dirs->size()));
    for (std::size_t i = 0; i < c.j.size(); ++i) {
        const Node e = c.item(i);
        if (!e.j.is_array() || e.j.size() != 3) throw SchemaError(e.path, "expected [[n_1..n_K], re, im]");
        const Node m = e.item(0);
        if (!m.j.is_array() || m.j.size() != idx.size())
            throw SchemaError(m.path, "expected " + std::to_string(idx.size()) + " indices");
        for (std::size_t s = 0; s < idx.size(); ++s) {
            idx[s] = m.item(s).integer();
            if (idx[s] < 0) throw SchemaError(m.item(s).path, "must be non-negative");
        }
        const int r = basis.rank(idx);
        if (r < 0) throw SchemaError(m.path, "degree exceeds N");
        if (seen[static_cast<std::size_t>(r)]) throw SchemaError(m.path, "duplicate multi-index");
        seen[static_cast<std::size_t>(r)] = true;
        psi.coeffs()[r] = {e.item(1).number(), e.item(2).number()};
    }
    return psi;
}

FieldState field_state_from_json(const json& j, const std::string& path) {
    const Node n{j, path};
    FieldState s{hermite_series_from_json(n.at("psi").j, path + ".psi"),
                 hermite_series_from_json(n.at("v").j, path + ".v"),
                 {},
                 {}};
    const Node l = n.at("lambdas"), lv = n.at("lambda_vs");
    l.array();
    lv.array();
    for (std::size_t i = 0; i < l.j.size(); ++i) s.lambdas.push_back(hermite_series_from_json(l.item(i).j, l.item(i).path));
    for (std::size_t i = 0; i < lv.j.size(); ++i)
        s.lambda_vs.push_back(hermite_series_from_json(lv.item(i).j, lv.item(i).path));
    return s;
}

OrbitQuadrature orbit_from_json(const json& j, const std::string& path) {
    const Node n{j, path};
    const std::string kind = n.at("kind").string();
    if (kind != "massive" && kind != "massless") throw SchemaError(path + ".kind", "expected massive or massless");
    const double param = n.at("param").number(), chi_max = n.at("chi_max").number();
    const int n_chi = n.at("n_chi").integer(), n_sphere = n.at("n_sphere").integer();
    try {
        return build_orbit(kind == "massive" ? OrbitKind::massive : OrbitKind::massless, param, chi_max, n_chi,
                           n_sphere);
    } catch (const std::exception& e) {
        throw SchemaError(path, e.what());
    }
}

OrbitField orbit_field_from_json(const json& j, const std::string& path) {
    const Node n{j, path};
    OrbitField f{orbit_from_json(n.at("orbit").j, path + ".orbit"), {}};
    const Node v = n.at("values");
    v.array();
    if (v.j.size() != f.orbit.size())
        throw SchemaError(v.path, "expected " + std::to_string(f.orbit.size()) + " values (one per orbit node)");
    f.field.values.resize(v.j.size());
    for (std::size_t i = 0; i < v.j.size(); ++i) f.field.values[i] = read_complex(v.item(i));
    return f;
}

DocumentKind document_kind(const json& j) {
    if (!j.is_object()) throw SchemaError("$", "expected an object");
    if (j.contains("L_max")) {
        const auto d = j.find("dual");
        return d != j.end() && d->is_boolean() && d->get<bool>() ? DocumentKind::supermomentum
                                                                  : DocumentKind::sphere_function;
    }
    if (j.contains("lambda")) return DocumentKind::bms_element;
    if (j.contains("N")) return DocumentKind::hermite_series;
    if (j.contains("psi")) return DocumentKind::field_state;
    if (j.contains("values")) return DocumentKind::induced_field;
    if (j.contains("kind")) return DocumentKind::orbit;
    throw SchemaError("$", "unrecognized document (no L_max, lambda, N, psi, values or kind key)");
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("not valid JSON: ") + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

namespace {

bool same_bits(const BMSElement& a, const BMSElement& b) { return same_bits(a.lambda, b.lambda) && same_bits(a.f, b.f); }
bool same_bits(const FieldState& a, const FieldState& b) {
    return same_bits(a.psi, b.psi) && same_bits(a.v, b.v) && same_bits(a.lambdas, b.lambdas) &&
           same_bits(a.lambda_vs, b.lambda_vs);
}
bool same_bits(const OrbitField& a, const OrbitField& b) {
    return same_bits(a.orbit, b.orbit) && same_bits_range(a.field.values, b.field.values);
}

template <class T, class Reader>
bool roundtrip_as(const json& j, Reader read) {
    const T first = read(j, "$");
    const std::string text = to_json(first).dump();
    const T second = read(parse_document(text), "$");
    return same_bits(first, second) && to_json(second).dump() == text;
}

} // namespace

bool roundtrip_text(const std::string& text) {
    const json j = parse_document(text);
    switch (document_kind(j)) {
    case DocumentKind::sphere_function: return roundtrip_as<SphereFunction>(j, sphere_function_from_json);
    case DocumentKind::supermomentum: return roundtrip_as<Supermomentum>(j, supermomentum_from_json);
    case DocumentKind::bms_element: return roundtrip_as<BMSElement>(j, bms_element_from_json);
    case DocumentKind::hermite_series: return roundtrip_as<HermiteSeries>(j, hermite_series_from_json);
    case DocumentKind::field_state: return roundtrip_as<FieldState>(j, field_state_from_json);
    case DocumentKind::orbit: return roundtrip_as<OrbitQuadrature>(j, orbit_from_json);
    case DocumentKind::induced_field: return roundtrip_as<OrbitField>(j, orbit_field_from_json);
    }
    return false;
}

bool roundtrip(const std::string& path) { return roundtrip_text(read_text_file(path)); }

} // namespace bms
