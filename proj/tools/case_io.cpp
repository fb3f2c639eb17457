#include "case_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "lca/error.hpp"

namespace lca::cli {

namespace {

const Json& require_key(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

double number(const Json& j, const char* what)
{
    if (!j.is_number()) throw InvalidInput(std::string("field \"") + what + "\" must be a real number");
    return j.get<double>();
}

double number_or(const Json& j, const char* key, double fallback)
{
    if (!j.contains(key)) return fallback;
    return number(j.at(key), key);
}

Residue integer(const Json& j, const char* what)
{
    if (!j.is_number_integer()) throw InvalidInput(std::string("field \"") + what + "\" must be an integer");
    return j.get<Residue>();
}

std::vector<Residue> integer_array(const Json& j, const char* what)
{
    if (!j.is_array()) throw InvalidInput(std::string("field \"") + what + "\" must be an array of integers");
    std::vector<Residue> out;
    for (const auto& x : j) out.push_back(integer(x, what));
    return out;
}

int bit(const Json& j, const char* what)
{
    const Residue v = integer(j, what);
    if (v != 0 && v != 1) throw InvalidInput(std::string("field \"") + what + "\" must be 0 or 1");
    return static_cast<int>(v);
}

GroupElement element_or_zero(const Json& j, const char* key, const FiniteAbelianGroup& fin)
{
    if (!j.contains(key)) return fin.zero();
    return fin.element(integer_array(j.at(key), key));
}

void write_number(std::ostream& os, double v)
{
    if (!std::isfinite(v)) {
        os << "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    os << s;
}

void write(std::ostream& os, const OrderedJson& j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
    case OrderedJson::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << inner << OrderedJson(it.key()).dump() << ": ";
            write(os, it.value(), indent + 1);
        }
        os << "\n" << pad << "}";
        return;
    }
    case OrderedJson::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // Short arrays of scalars stay on one line.
        const bool flat = std::all_of(j.begin(), j.end(), [](const auto& x) { return x.is_primitive(); }) && j.size() <= 8;
        os << (flat ? "[" : "[\n");
        bool first = true;
        for (const auto& x : j) {
            if (!first) os << (flat ? ", " : ",\n");
            first = false;
            if (!flat) os << inner;
            write(os, x, indent + 1);
        }
        os << (flat ? "]" : "\n" + pad + "]");
        return;
    }
    case OrderedJson::value_t::number_float:
        write_number(os, j.get<double>());
        return;
    default:
        os << j.dump();
    }
}

}  // namespace

Json load_input(const std::string& source)
{
    try {
        if (!source.empty() && source.front() == '{') return Json::parse(source);
        if (source == "-") return Json::parse(std::cin);
        std::ifstream in(source);
        if (!in) throw InvalidInput("cannot open input file " + source);
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

FiniteAbelianGroup parse_group(const Json& j)
{
    // no group at all means X = R x Z(2)
    if (j.is_object() && !j.contains("cyclic_orders")) return FiniteAbelianGroup(std::vector<Residue>{});
    return FiniteAbelianGroup(integer_array(require_key(j, "cyclic_orders"), "cyclic_orders"));
}

XAutomorphism parse_alpha(const Json& j, const AmbientGroup& group)
{
    const double a = number(require_key(j, "a"), "a");
    const auto& fin = group.finite();
    const auto r = static_cast<Eigen::Index>(fin.rank());
    IntMatrix m = IntMatrix::Identity(r, r);
    if (j.contains("alpha_G")) {
        const auto& rows = require_key(j.at("alpha_G"), "matrix");
        if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != r)
            throw InvalidInput("alpha_G.matrix must have one row per cyclic factor");
        for (Eigen::Index i = 0; i < r; ++i) {
            const auto row = integer_array(rows[static_cast<std::size_t>(i)], "matrix");
            if (static_cast<Eigen::Index>(row.size()) != r) throw InvalidInput("alpha_G.matrix must be square");
            for (Eigen::Index k = 0; k < r; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
        }
    }
    return XAutomorphism(group, a, GroupAutomorphism(fin, m));
}

ThetaParams parse_theta(const Json& j)
{
    const Json& p = j.contains("theta") ? j.at("theta") : j;
    if (!p.is_object()) throw InvalidInput("Theta parameters must be an object");
    ThetaParams t;
    t.sigma = number(require_key(p, "sigma"), "sigma");
    t.sigma_p = number(require_key(p, "sigma_p"), "sigma_p");
    t.m = number_or(p, "m", 0.0);
    t.m_p = number_or(p, "m_p", 0.0);
    t.kappa = number(require_key(p, "kappa"), "kappa");
    if (t.sigma < 0.0 || t.sigma_p < 0.0) throw InvalidInput("sigma and sigma_p must be >= 0");
    return t;
}

AtomicSignedMeasure parse_measure(const Json& j, const AmbientGroup& group)
{
    if (!j.is_object()) throw InvalidInput("measure must be an object");
    if (j.contains("theta")) return theta_to_measure(parse_theta(j.at("theta")), group);
    const auto& terms = require_key(j, "terms");
    if (!terms.is_array()) throw InvalidInput("\"terms\" must be an array");
    std::vector<MeasureTerm> out;
    for (const auto& t : terms) {
        if (!t.is_object()) throw InvalidInput("measure term must be an object");
        MeasureTerm term;
        term.c = number(require_key(t, "c"), "c");
        term.atom.sigma = number_or(t, "sigma", 0.0);
        term.atom.shift = number_or(t, "shift", 0.0);
        term.m = t.contains("m") ? bit(t.at("m"), "m") : 0;
        term.g = element_or_zero(t, "g", group.finite());
        out.push_back(term);
    }
    return {group, out};
}

XPoint parse_point(const Json& j, const AmbientGroup& group)
{
    if (!j.is_object()) throw InvalidInput("point must be an object {t, m, g}");
    return {number_or(j, "t", 0.0), j.contains("m") ? bit(j.at("m"), "m") : 0,
            element_or_zero(j, "g", group.finite())};
}

std::vector<Z2Weights> parse_weights(const Json& j, const AmbientGroup& group)
{
    if (j.is_object() && j.contains("terms")) return measure_to_weights(parse_measure(j, group));
    const auto& w = require_key(j, "weights");
    if (!w.is_array() || w.size() != group.finite().cardinality())
        throw InvalidInput("\"weights\" needs one [a, b] pair per element of G");
    std::vector<Z2Weights> out;
    for (const auto& pair : w) {
        if (!pair.is_array() || pair.size() != 2) throw InvalidInput("each weight must be a pair [a, b]");
        out.push_back({number(pair[0], "weights"), number(pair[1], "weights")});
    }
    return out;
}

GenerateSpec parse_generate_spec(const Json& j)
{
    GenerateSpec spec;
    if (j.is_null()) return spec;
    if (!j.is_object()) throw InvalidInput("generate spec must be an object");
    if (j.contains("group")) spec.cyclic_orders = integer_array(require_key(j.at("group"), "cyclic_orders"), "cyclic_orders");
    if (j.contains("cyclic_orders")) spec.cyclic_orders = integer_array(j.at("cyclic_orders"), "cyclic_orders");
    const FiniteAbelianGroup fin(spec.cyclic_orders);
    const AmbientGroup group(fin);
    if (j.contains("a")) spec.a = number(j.at("a"), "a");
    if (j.contains("alpha_G")) {
        const auto a = parse_alpha({{"a", 1.0}, {"alpha_G", j.at("alpha_G")}}, group);
        spec.alpha_g = a.alpha_g().matrix();
    }
    if (j.contains("theta2")) spec.theta2 = parse_theta(j.at("theta2"));
    if (j.contains("kappa1")) spec.kappa1 = number(j.at("kappa1"), "kappa1");
    if (j.contains("omega2")) spec.omega2 = parse_measure(j.at("omega2"), group).terms();
    if (j.contains("vartheta")) spec.vartheta = number(j.at("vartheta"), "vartheta");
    if (j.contains("x2")) spec.x2 = parse_point(j.at("x2"), group);
    return spec;
}

OrderedJson to_json(const FiniteAbelianGroup& group)
{
    return {{"cyclic_orders", group.cyclic_orders()}};
}

OrderedJson to_json(const GroupElement& g) { return g.coords; }

OrderedJson to_json(const XPoint& x) { return {{"t", x.t}, {"m", x.m}, {"g", x.g.coords}}; }

OrderedJson to_json(const XAutomorphism& alpha)
{
    const auto& m = alpha.alpha_g().matrix();
    OrderedJson rows = OrderedJson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        OrderedJson row = OrderedJson::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
    }
    return {{"a", alpha.a()}, {"alpha_G", {{"matrix", rows}}}};
}

OrderedJson to_json(const AtomicSignedMeasure& mu)
{
    OrderedJson terms = OrderedJson::array();
    for (const auto& t : mu.terms())
        terms.push_back({{"c", t.c}, {"sigma", t.atom.sigma}, {"shift", t.atom.shift}, {"m", t.m}, {"g", t.g.coords}});
    return {{"terms", terms}};
}

OrderedJson to_json(const ThetaParams& p)
{
    return {{"sigma", p.sigma}, {"sigma_p", p.sigma_p}, {"m", p.m}, {"m_p", p.m_p}, {"kappa", p.kappa}};
}

std::string dump(const OrderedJson& j)
{
    std::ostringstream os;
    write(os, j, 0);
    os << "\n";
    return os.str();
}

void write_atomically(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw InvalidInput("cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InvalidInput("cannot replace " + path + ": " + ec.message());
    }
}

}  // namespace lca::cli
