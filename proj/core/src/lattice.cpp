#include "rsl/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "rsl/errors.hpp"

namespace rsl {

using BigInt = boost::multiprecision::cpp_int;

namespace {

Index narrow_checked(const BigInt& v, const char* context) {
    if (v > std::numeric_limits<Index>::max() || v < std::numeric_limits<Index>::min())
        throw OverflowError(std::string(context) + ": value " + v.str() +
                            " exceeds the 64-bit lattice coordinate range");
    return static_cast<Index>(v);
}

BigInt monomial_value(const Point& y, const MultiIndex& gamma) {
    BigInt acc = 1;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        for (int e = 0; e < gamma[i]; ++e) acc *= y[i];
    }
    return acc;
}

}  // namespace

double ConvexBody::inner_radius(int arity) const {
    return kind_ == Kind::Ball ? 1.0 : 1.0 / std::sqrt(static_cast<double>(arity));
}

double ConvexBody::volume(int arity) const {
    if (kind_ == Kind::Cube) return std::pow(2.0 * inner_radius(arity), arity);
    // unit euclidean ball
    switch (arity) {
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi / 3.0;
        default:
            throw ValidationError("ball volume implemented for arity <= 3");
    }
}

bool ConvexBody::contains(const RealPoint& x) const {
    if (kind_ == Kind::Ball) {
        double s = 0.0;
        for (double c : x) s += c * c;
        return s < 1.0;
    }
    double m = 0.0;
    for (double c : x) m = std::max(m, std::abs(c));
    return m < inner_radius(static_cast<int>(x.size()));
}

bool ConvexBody::contains_scaled(const Point& y, double t) const {
    if (kind_ == Kind::Ball) {
        double s = 0.0;  // |y|^2 is exact in double at desk scale
        for (Index c : y) s += static_cast<double>(c) * static_cast<double>(c);
        return s < t * t;
    }
    Index m = 0;
    for (Index c : y) m = std::max(m, std::abs(c));
    return static_cast<double>(m) * std::sqrt(static_cast<double>(y.size())) < t;
}

ConvexBody ConvexBody::parse(const std::string& name) {
    if (name == "ball") return ball();
    if (name == "cube") return cube();
    throw ValidationError("unknown body '" + name + "' (expected ball|cube)");
}

PolynomialMap::PolynomialMap(int arity, std::vector<Component> components)
    : arity_(arity), degree_(0), components_(std::move(components)) {
    if (arity_ < 1) throw ValidationError("polynomial map arity must be >= 1");
    if (components_.empty()) throw ValidationError("polynomial map needs >= 1 component");
    for (auto& comp : components_) {
        for (auto it = comp.begin(); it != comp.end();) {
            const auto& [gamma, coeff] = *it;
            if (gamma.size() != static_cast<std::size_t>(arity_))
                throw ValidationError("multi-index arity mismatch");
            int total = 0;
            for (int e : gamma) {
                if (e < 0) throw ValidationError("negative exponent in multi-index");
                total += e;
            }
            if (total == 0 && coeff != 0)
                throw ValidationError("constant term not allowed: P(0) must be 0");
            if (coeff == 0) {
                it = comp.erase(it);
                continue;
            }
            degree_ = std::max(degree_, total);
            ++it;
        }
    }
}

Point PolynomialMap::evaluate(const Point& y) const {
    if (y.size() != static_cast<std::size_t>(arity_))
        throw ValidationError("point arity mismatch in polynomial evaluation");
    Point out(components_.size(), 0);
    for (std::size_t j = 0; j < components_.size(); ++j) {
        BigInt acc = 0;
        for (const auto& [gamma, coeff] : components_[j])
            acc += BigInt(coeff) * monomial_value(y, gamma);
        out[j] = narrow_checked(acc, "polynomial evaluation");
    }
    return out;
}

std::string PolynomialMap::serialize() const {
    std::ostringstream os;
    os << dimension() << ' ' << arity_ << ' ' << degree_ << '\n';
    for (std::size_t j = 0; j < components_.size(); ++j) {
        for (const auto& [gamma, coeff] : components_[j]) {
            os << j;
            for (int e : gamma) os << ' ' << e;
            os << ' ' << coeff << '\n';
        }
    }
    return os.str();
}

PolynomialMap PolynomialMap::deserialize(std::istream& in) {
    int d = 0, k = 0, deg = 0;
    if (!(in >> d >> k >> deg)) throw ValidationError("bad polynomial map header");
    if (d < 1 || k < 1) throw ValidationError("bad polynomial map dimensions");
    std::vector<Component> comps(static_cast<std::size_t>(d));
    std::size_t j = 0;
    while (in >> j) {
        if (j >= comps.size()) throw ValidationError("component index out of range");
        MultiIndex gamma(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < k; ++i)
            if (!(in >> gamma[static_cast<std::size_t>(i)]))
                throw ValidationError("truncated polynomial map term");
        Index coeff = 0;
        if (!(in >> coeff)) throw ValidationError("truncated polynomial map term");
        comps[j][gamma] += coeff;
    }
    return PolynomialMap(k, std::move(comps));
}

namespace {

// Monomial-sum grammar for the CLI. One component per map; multi-component
// maps are written as components separated by ';'.
struct MapParser {
    const std::string& text;
    std::size_t pos = 0;
    const Index* coeff_value;

    explicit MapParser(const std::string& t, const Index* cv) : text(t), coeff_value(cv) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) { ++pos; return true; }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    Index parse_integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) throw ValidationError("expected integer in map expression");
        return std::stoll(text.substr(start, pos - start));
    }

    // variable: n | n1 | n2 | n3; returns 0-based index and arity seen
    int parse_variable(int& max_var) {
        skip_ws();
        if (peek() != 'n') throw ValidationError("expected variable in map expression");
        ++pos;
        int var = 0;
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            var = text[pos] - '1';
            if (var < 0 || var > 2) throw ValidationError("variables are n, n1, n2, n3");
            ++pos;
        }
        max_var = std::max(max_var, var + 1);
        return var;
    }

    // term := [sign] [coeff|c] ['*'] var['^'exp] ('*' var['^'exp])*
    void parse_term(std::map<MultiIndex, Index>& terms, int& max_var, int sign) {
        Index coeff = sign;
        bool saw_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff *= parse_integer();
            saw_coeff = true;
        } else if (peek() == 'c') {
            if (!coeff_value)
                throw ValidationError("symbolic coefficient 'c' not allowed here");
            ++pos;
            coeff *= *coeff_value;
            saw_coeff = true;
        }
        MultiIndex gamma(3, 0);
        bool saw_var = false;
        for (;;) {
            if (saw_coeff || saw_var) {
                std::size_t save = pos;
                bool star = eat('*');
                if (peek() != 'n') {
                    if (star) pos = save;
                    break;
                }
            } else if (peek() != 'n') {
                break;
            }
            int var = parse_variable(max_var);
            int exp = 1;
            if (eat('^')) exp = static_cast<int>(parse_integer());
            if (exp < 1) throw ValidationError("exponents must be >= 1");
            gamma[static_cast<std::size_t>(var)] += exp;
            saw_var = true;
        }
        if (!saw_var)
            throw ValidationError("constant term not allowed: P(0) must be 0");
        terms[gamma] += coeff;
    }

    std::map<MultiIndex, Index> parse_component(int& max_var) {
        std::map<MultiIndex, Index> terms;
        int sign = 1;
        if (eat('-')) sign = -1;
        else eat('+');
        parse_term(terms, max_var, sign);
        for (;;) {
            if (eat('+')) parse_term(terms, max_var, 1);
            else if (eat('-')) parse_term(terms, max_var, -1);
            else break;
        }
        return terms;
    }
};

}  // namespace

PolynomialMap PolynomialMap::parse(const std::string& text, const Index* coefficient_value) {
    MapParser parser(text, coefficient_value);
    int max_var = 0;
    std::vector<std::map<MultiIndex, Index>> raw;
    raw.push_back(parser.parse_component(max_var));
    while (parser.eat(';')) raw.push_back(parser.parse_component(max_var));
    parser.skip_ws();
    if (parser.pos != text.size())
        throw ValidationError("trailing characters in map expression: '" +
                              text.substr(parser.pos) + "'");
    const int k = std::max(max_var, 1);
    std::vector<Component> comps;
    comps.reserve(raw.size());
    for (auto& terms : raw) {
        Component comp;
        for (auto& [gamma, coeff] : terms) {
            MultiIndex cut(gamma.begin(), gamma.begin() + k);
            comp[cut] += coeff;
        }
        comps.push_back(std::move(comp));
    }
    return PolynomialMap(k, std::move(comps));
}

PolynomialMap identity_map() { return monomial_map(1); }

PolynomialMap monomial_map(int degree, Index coeff) {
    if (degree < 1) throw ValidationError("monomial degree must be >= 1");
    PolynomialMap::Component comp;
    comp[MultiIndex{degree}] = coeff;
    return PolynomialMap(1, {std::move(comp)});
}

CanonicalMapping::CanonicalMapping(int arity, int degree)
    : arity_(arity), degree_(degree) {
    if (arity < 1 || degree < 1)
        throw ValidationError("canonical mapping needs arity >= 1 and degree >= 1");
    // ascending lexicographic enumeration of {gamma : 0 < |gamma| <= degree}
    MultiIndex gamma(static_cast<std::size_t>(arity), 0);
    for (;;) {
        std::size_t axis = gamma.size();
        while (axis > 0) {
            --axis;
            if (gamma[axis] < degree) break;
            gamma[axis] = 0;
            if (axis == 0) {
                std::sort(gamma_.begin(), gamma_.end());
                goto done;
            }
        }
        ++gamma[axis];
        int total = 0;
        for (int e : gamma) total += e;
        if (total >= 1 && total <= degree) gamma_.push_back(gamma);
    }
done:
    exponents_.reserve(gamma_.size());
    for (const auto& g : gamma_) {
        int total = 0;
        for (int e : g) total += e;
        exponents_.push_back(total);
    }
    if (dimension() > 10)
        throw ValidationError("canonical mapping dimension exceeds the soft limit 10");
}

Point CanonicalMapping::lift(const Point& y) const {
    if (y.size() != static_cast<std::size_t>(arity_))
        throw ValidationError("point arity mismatch in canonical lift");
    Point out(gamma_.size(), 0);
    for (std::size_t i = 0; i < gamma_.size(); ++i)
        out[i] = narrow_checked(monomial_value(y, gamma_[i]), "canonical lift");
    return out;
}

PolynomialMap CanonicalMapping::as_polynomial_map() const {
    std::vector<PolynomialMap::Component> comps(gamma_.size());
    for (std::size_t i = 0; i < gamma_.size(); ++i) comps[i][gamma_[i]] = 1;
    return PolynomialMap(arity_, std::move(comps));
}

std::vector<Point> enumerate_lattice_points(const ConvexBody& body, int arity,
                                            double t) {
    if (t <= 0.0) throw ValidationError("dilation parameter t must be positive");
    if (arity < 1 || arity > 3)
        throw ValidationError("lattice enumeration supports arity 1..3");
    const Index bound = static_cast<Index>(std::ceil(t));
    std::vector<Point> points;
    Point y(static_cast<std::size_t>(arity), -bound);
    for (;;) {
        if (body.contains_scaled(y, t)) points.push_back(y);
        std::size_t axis = y.size();
        while (axis > 0) {
            --axis;
            if (y[axis] < bound) { ++y[axis]; break; }
            y[axis] = -bound;
            if (axis == 0) return points;
        }
    }
}

RealPoint dilate(double t, const std::vector<int>& exponents, const RealPoint& x) {
    if (t <= 0.0) throw ValidationError("dilation parameter t must be positive");
    if (exponents.size() != x.size())
        throw ValidationError("dilation exponent count mismatch");
    RealPoint out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = std::pow(t, exponents[i]) * x[i];
    return out;
}

}  // namespace rsl
