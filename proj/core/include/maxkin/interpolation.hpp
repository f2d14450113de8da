#ifndef MAXKIN_INTERPOLATION_HPP
#define MAXKIN_INTERPOLATION_HPP

#include <vector>

namespace maxkin {

// Cubic Hermite interpolant on a strictly increasing grid. Node slopes come from
// the derivative of the local cubic through the four nearest nodes (fourth-order
// accurate on smooth data) and are then clamped into the monotone region of the
// data (de Boor-Swartz), so monotone data produce a monotone interpolant without
// the accuracy loss of harmonic-mean slope formulas.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y, bool enforce_monotone = true);

    double operator()(double q) const;
    double derivative(double q) const;

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& y() const { return y_; }

private:
    std::size_t interval(double q) const;
    std::vector<double> x_, y_, d_;
};

} // namespace maxkin

#endif
