#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace heatlab {

enum class Kind { Circle, Sphere, Euclidean, HalfSpace, Product, Cone, Rescaled };

/// One Laplace eigenvalue with multiplicity.
struct SpectralLevel {
    double mu = 0.0;
    std::int64_t mult = 1;
    int index = 0;
};

/// Coordinates, flattened per space kind:
///   Circle        {theta}
///   Sphere(n,k)   n+1 ambient coordinates with |x| = k
///   Euclidean(n)  n coordinates
///   HalfSpace(n)  n coordinates, last one > 0
///   Product       left coordinates followed by right coordinates
///   Cone(link)    {r} followed by link coordinates
///   Rescaled      base coordinates (distances scale by a)
struct Point {
    std::vector<double> coords;
};

/// Symbolic model space with exact geometry and exact Laplace spectrum.
/// Immutable; all operations are pure.
class ModelSpace {
public:
    static ModelSpace circle(double r);
    static ModelSpace sphere(int n, double k);  // Sphere(1,k) aliases Circle(k)
    static ModelSpace euclidean(int n);
    static ModelSpace half_space(int n);
    static ModelSpace product(const ModelSpace& left, const ModelSpace& right);
    static ModelSpace cone(const ModelSpace& link);
    static ModelSpace rescaled(const ModelSpace& base, double a, double b);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool compact() const;
    /// Circle/Sphere radius.
    double radius() const { return radius_; }
    double scale_a() const { return scale_a_; }
    double scale_b() const { return scale_b_; }
    /// Product left factor; Cone link; Rescaled base.
    const ModelSpace& left() const { return *left_; }
    const ModelSpace& right() const { return *right_; }
    int coord_count() const;
    int product_depth() const;

    double volume() const;
    double distance(const Point& x, const Point& y) const;

    /// First max_level+1 distinct eigenvalue levels, sorted ascending.
    std::vector<SpectralLevel> spectrum(int max_level) const;
    /// All levels with eigenvalue <= mu_cap.
    std::vector<SpectralLevel> levels_below(double mu_cap) const;

    /// Addition-theorem eigenspace kernel: sum over an L2-orthonormal basis
    /// of the level-l eigenspace of phi_i(x) phi_i(y).  Circle and Sphere only.
    double eigenspace_sum(int level, const Point& x, const Point& y) const;
    /// Same kernel as a function of distance alone (homogeneity).
    double eigenspace_sum_at_distance(int level, double dist) const;

    std::string str() const;
    static ModelSpace parse(const std::string& text);

    bool operator==(const ModelSpace& other) const { return str() == other.str(); }

private:
    ModelSpace() = default;

    Kind kind_ = Kind::Circle;
    int dim_ = 1;
    double radius_ = 1.0;
    double scale_a_ = 1.0, scale_b_ = 1.0;
    std::shared_ptr<const ModelSpace> left_, right_;
};

/// Shortest angular difference in [0, pi].
double angle_diff(double a, double b);

}  // namespace heatlab
