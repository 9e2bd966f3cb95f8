#include <cmath>

#include "ropt/manifolds.hpp"

namespace ropt {
namespace {

class Product final : public Manifold {
 public:
  explicit Product(std::vector<ManifoldDescriptor> parts)
      : parts_(std::move(parts)) {}

  std::string name() const override {
    std::string s = "Product(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i > 0) s += " x ";
      s += parts_[i]->name();
    }
    return s + ")";
  }
  std::size_t dim() const override {
    std::size_t d = 0;
    for (const auto& p : parts_) d += p->dim();
    return d;
  }
  double typical_dist() const override {
    double sq = 0.0;
    for (const auto& p : parts_) sq += p->typical_dist() * p->typical_dist();
    return std::sqrt(sq);
  }
  bool second_order_retraction() const override {
    for (const auto& p : parts_) {
      if (!p->second_order_retraction()) return false;
    }
    return true;
  }
  bool has_exact_hessian_conversion() const override {
    for (const auto& p : parts_) {
      if (!p->has_exact_hessian_conversion()) return false;
    }
    return true;
  }

  void check_point(const Point& x) const override {
    check_count(x, "point");
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      parts_[i]->check_point(x.components()[i]);
    }
  }
  void check_tangent(const Point& x, const Tangent& u) const override {
    check_count(x, "point");
    check_count(u, "tangent vector");
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      parts_[i]->check_tangent(x.components()[i], u.components()[i]);
    }
  }
  void check_ambient(const Point& x, const Ambient& z) const override {
    check_count(x, "point");
    check_count(z, "ambient vector");
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      parts_[i]->check_ambient(x.components()[i], z.components()[i]);
    }
  }

 protected:
  double do_inner(const Point& x, const Tangent& u,
                  const Tangent& v) const override {
    double acc = 0.0;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      acc += parts_[i]->inner(x.components()[i], u.components()[i],
                              v.components()[i]);
    }
    return acc;
  }

  Tangent do_proj(const Point& x, const Ambient& z) const override {
    return map<Tangent>([&](std::size_t i) {
      return parts_[i]->proj(x.components()[i], z.components()[i]);
    });
  }

  Point do_retract(const Point& x, const Tangent& u, double t) const override {
    return map<Point>([&](std::size_t i) {
      return parts_[i]->retract(x.components()[i], u.components()[i], t);
    });
  }

  Tangent do_egrad2rgrad(const Point& x, const Ambient& egrad) const override {
    return map<Tangent>([&](std::size_t i) {
      return parts_[i]->egrad2rgrad(x.components()[i], egrad.components()[i]);
    });
  }

  Tangent do_ehess2rhess(const Point& x, const Ambient& egrad,
                         const Ambient& ehess_u,
                         const Tangent& u) const override {
    return map<Tangent>([&](std::size_t i) {
      return parts_[i]->ehess2rhess(x.components()[i], egrad.components()[i],
                                    ehess_u.components()[i],
                                    u.components()[i]);
    });
  }

  Point do_rand_point(Rng& rng) const override {
    return map<Point>([&](std::size_t i) { return parts_[i]->rand_point(rng); });
  }

  Tangent do_transport(const Point& x, const Point& y,
                       const Tangent& u) const override {
    return map<Tangent>([&](std::size_t i) {
      return parts_[i]->transport(x.components()[i], y.components()[i],
                                  u.components()[i]);
    });
  }

  Tangent do_zero_tangent(const Point& x) const override {
    return map<Tangent>([&](std::size_t i) {
      return parts_[i]->zero_tangent(x.components()[i]);
    });
  }

  Ambient do_tangent_to_ambient(const Point& x,
                                const Tangent& u) const override {
    return map<Ambient>([&](std::size_t i) {
      return parts_[i]->tangent_to_ambient(x.components()[i],
                                           u.components()[i]);
    });
  }

  Ambient do_point_to_ambient(const Point& x) const override {
    return map<Ambient>([&](std::size_t i) {
      return parts_[i]->point_to_ambient(x.components()[i]);
    });
  }

  Ambient do_rand_ambient(const Point& x, Rng& rng) const override {
    return map<Ambient>([&](std::size_t i) {
      return parts_[i]->rand_ambient(x.components()[i], rng);
    });
  }

  double do_constraint_violation(const Point& x) const override {
    double v = 0.0;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      v = std::max(v, parts_[i]->constraint_violation(x.components()[i]));
    }
    return v;
  }

 private:
  template <class E, class F>
  E map(F&& f) const {
    typename E::Components out;
    out.reserve(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i) out.push_back(f(i));
    return E(std::move(out));
  }

  template <class E>
  void check_count(const E& e, const char* what) const {
    if (!e.is_product() || e.components().size() != parts_.size()) {
      throw DimensionError(name() + ": " + what + " must have " +
                           std::to_string(parts_.size()) + " components");
    }
  }

  std::vector<ManifoldDescriptor> parts_;
};

}  // namespace

ManifoldDescriptor product_factory(std::vector<ManifoldDescriptor> components) {
  if (components.empty()) {
    throw ArgumentError("product_factory: need at least one component");
  }
  for (const auto& c : components) {
    if (!c) throw ArgumentError("product_factory: null component");
  }
  return std::make_shared<Product>(std::move(components));
}

}  // namespace ropt
