#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace rsl {

using Index = std::int64_t;
using Point = std::vector<Index>;        // lattice point
using RealPoint = std::vector<double>;
using MultiIndex = std::vector<int>;     // exponent vector, one entry per variable

// Bounded convex open set Omega with B(0, c) <= Omega <= B(0, 1).
// Two concrete bodies: the euclidean unit ball (c = 1) and the open
// sup-norm cube of half-width 1/sqrt(k) (c = 1/sqrt(k)).
class ConvexBody {
public:
    enum class Kind { Ball, Cube };

    explicit ConvexBody(Kind kind) : kind_(kind) {}

    Kind kind() const { return kind_; }
    double inner_radius(int arity) const;
    double volume(int arity) const;                       // |Omega|
    bool contains(const RealPoint& x) const;              // x in Omega
    bool contains_scaled(const Point& y, double t) const; // y/t in Omega

    std::string name() const { return kind_ == Kind::Ball ? "ball" : "cube"; }
    static ConvexBody parse(const std::string& name);

    bool operator==(const ConvexBody& other) const { return kind_ == other.kind_; }

private:
    Kind kind_;
};

inline ConvexBody ball() { return ConvexBody(ConvexBody::Kind::Ball); }
inline ConvexBody cube() { return ConvexBody(ConvexBody::Kind::Cube); }

// Integer polynomial mapping P = (P_1, ..., P_d): Z^k -> Z^d with P_j(0) = 0.
class PolynomialMap {
public:
    using Component = std::map<MultiIndex, Index>;  // multi-index -> coefficient

    PolynomialMap(int arity, std::vector<Component> components);

    int arity() const { return arity_; }
    int dimension() const { return static_cast<int>(components_.size()); }
    int degree() const { return degree_; }
    const std::vector<Component>& components() const { return components_; }

    // Exact evaluation; throws OverflowError if a component leaves int64 range.
    Point evaluate(const Point& y) const;

    // Plain-text format: "d k deg" header, then "component multiindex coefficient"
    // lines in deterministic order.
    std::string serialize() const;
    static PolynomialMap deserialize(std::istream& in);

    // CLI mini-grammar: sums of integer-coefficient monomials in n (k = 1)
    // or n1, n2, n3. "n^2", "3*n^2 - 2*n", "n1*n2^2". Constant terms rejected.
    // A single symbolic coefficient "c" is allowed when coefficient_value is
    // supplied (used by sweep templates).
    static PolynomialMap parse(const std::string& text,
                               const Index* coefficient_value = nullptr);

    bool operator==(const PolynomialMap& other) const {
        return arity_ == other.arity_ && components_ == other.components_;
    }

private:
    int arity_;
    int degree_;
    std::vector<Component> components_;
};

PolynomialMap identity_map();                            // P(n) = n
PolynomialMap monomial_map(int degree, Index coeff = 1); // P(n) = coeff * n^degree

// The multi-index set Gamma = {gamma != 0 : |gamma| <= degree} in lexicographic
// order, together with the exponents |gamma| that drive the t^A dilations.
class CanonicalMapping {
public:
    CanonicalMapping(int arity, int degree);

    int arity() const { return arity_; }
    int degree() const { return degree_; }
    int dimension() const { return static_cast<int>(gamma_.size()); }
    const std::vector<MultiIndex>& gamma() const { return gamma_; }
    const std::vector<int>& dilation_exponents() const { return exponents_; }

    // (y)^Gamma, exact; throws OverflowError when a monomial leaves int64 range.
    Point lift(const Point& y) const;

    PolynomialMap as_polynomial_map() const;

    bool operator==(const CanonicalMapping& other) const {
        return arity_ == other.arity_ && degree_ == other.degree_;
    }

private:
    int arity_;
    int degree_;
    std::vector<MultiIndex> gamma_;
    std::vector<int> exponents_;
};

// Integer points of the dilate Omega_t, ascending lexicographic order.
std::vector<Point> enumerate_lattice_points(const ConvexBody& body, int arity,
                                            double t);

// Componentwise scaling x_gamma -> t^{|gamma|} x_gamma.
RealPoint dilate(double t, const std::vector<int>& exponents, const RealPoint& x);

}  // namespace rsl
