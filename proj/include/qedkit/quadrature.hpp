#ifndef QEDKIT_QUADRATURE_HPP
#define QEDKIT_QUADRATURE_HPP

#include <array>
#include <cmath>

namespace qedkit::quad {

// 20-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirror).
inline constexpr std::array<double, 10> kGlNodes = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
    0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
    0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
    0.9931285991850949};
inline constexpr std::array<double, 10> kGlWeights = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
    0.0176140071391521};

// Integrate f over [a, b] with one 20-point Gauss-Legendre rule.
template <typename F>
double gauss20(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double dx = h * kGlNodes[i];
        s += kGlWeights[i] * (f(c + dx) + f(c - dx));
    }
    return s * h;
}

// Integrate f over [a, b] with fixed-width Gauss-Legendre panels.
template <typename F>
double panels(F&& f, double a, double b, double width) {
    double s = 0.0;
    for (double x = a; x < b; x += width) s += gauss20(f, x, std::min(x + width, b));
    return s;
}

// Integrate f over [a, b] by panel halving until successive values agree.
template <typename F>
double adaptive(F&& f, double a, double b, double tol, int max_halvings = 12) {
    double width = (b - a) / 8.0;
    double prev = panels(f, a, b, width);
    for (int i = 0; i < max_halvings; ++i) {
        width *= 0.5;
        const double cur = panels(f, a, b, width);
        if (std::fabs(cur - prev) <= tol * std::max(1.0, std::fabs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

} // namespace qedkit::quad

#endif
