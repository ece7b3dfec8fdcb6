#pragma once

// Velocity-field catalog: constant, rigid rotation, shear, a rough Fourier
// sample with Sobolev-controlled decay, and a time-oscillatory wrapper.
// Fields expose analytic divergence so projection identities can be checked
// without numerical differentiation.

#include <functional>
#include <memory>
#include <optional>

#include "pum/geom.hpp"

namespace pum {

class VectorField {
  public:
    virtual ~VectorField() = default;
    virtual Vec2 value(Vec2 x, double t) const = 0;
    virtual double divergence(Vec2 x, double t) const = 0;
    // set when the field is spatially uniform at time t (enables closed-form
    // face coefficients)
    virtual std::optional<Vec2> uniform_value(double) const { return std::nullopt; }
    // set when the field is constant on triangle `tri` of the hat mesh it was
    // built against (enables exact positive-part integrals)
    virtual std::optional<Vec2> value_on_triangle(int, double) const { return std::nullopt; }
};

class ConstantField : public VectorField {
  public:
    explicit ConstantField(Vec2 c) : c_(c) {}
    Vec2 value(Vec2, double) const override { return c_; }
    double divergence(Vec2, double) const override { return 0.0; }
    std::optional<Vec2> uniform_value(double) const override { return c_; }
    std::optional<Vec2> value_on_triangle(int, double) const override { return c_; }

  private:
    Vec2 c_;
};

// b(x) = ω·(x − c)^⊥, divergence-free
class RotationField : public VectorField {
  public:
    RotationField(Vec2 center, double omega) : c_(center), w_(omega) {}
    Vec2 value(Vec2 x, double) const override {
        return Vec2{-(x.y - c_.y), x.x - c_.x} * w_;
    }
    double divergence(Vec2, double) const override { return 0.0; }

  private:
    Vec2 c_;
    double w_;
};

// b(x) = (rate·x₂, 0), divergence-free
class ShearField : public VectorField {
  public:
    explicit ShearField(double rate) : rate_(rate) {}
    Vec2 value(Vec2 x, double) const override { return {rate_ * x.y, 0.0}; }
    double divergence(Vec2, double) const override { return 0.0; }

  private:
    double rate_;
};

// Random trigonometric sum with mode amplitudes |k|^{-decay}; decay ≈ 2
// keeps first derivatives q-integrable while the field stays visibly rough.
class RoughField : public VectorField {
  public:
    RoughField(int max_mode, double decay, double amplitude, unsigned seed);
    Vec2 value(Vec2 x, double) const override;
    double divergence(Vec2 x, double) const override;

  private:
    struct Mode {
        Vec2 k;       // wave vector (2π included)
        Vec2 dir;     // amplitude-scaled direction
        double phase;
    };
    std::vector<Mode> modes_;
};

// time factor cos(2π f t) on top of any field
class OscillatoryField : public VectorField {
  public:
    OscillatoryField(std::shared_ptr<const VectorField> base, double freq)
        : base_(std::move(base)), f_(freq) {}
    Vec2 value(Vec2 x, double t) const override {
        return base_->value(x, t) * std::cos(2 * M_PI * f_ * t);
    }
    double divergence(Vec2 x, double t) const override {
        return base_->divergence(x, t) * std::cos(2 * M_PI * f_ * t);
    }
    std::optional<Vec2> uniform_value(double t) const override {
        auto u = base_->uniform_value(t);
        if (!u) return std::nullopt;
        return *u * std::cos(2 * M_PI * f_ * t);
    }

  private:
    std::shared_ptr<const VectorField> base_;
    double f_;
};

// arbitrary analytic field from lambdas (tests, manufactured cases)
class FunctionField : public VectorField {
  public:
    FunctionField(std::function<Vec2(Vec2)> f, std::function<double(Vec2)> div)
        : f_(std::move(f)), div_(std::move(div)) {}
    Vec2 value(Vec2 x, double) const override { return f_(x); }
    double divergence(Vec2 x, double) const override { return div_(x); }

  private:
    std::function<Vec2(Vec2)> f_;
    std::function<double(Vec2)> div_;
};

}  // namespace pum
