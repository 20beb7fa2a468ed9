#include <cstdio>

#include "nlsdbar/parametrix.hpp"

int main() {
    const double res = nlsdbar::pc::jump_residual(1, 2.0, 0.5);
    std::printf("jump residual %.3e\n", res);
    return res < 1e-10 ? 0 : 1;
}
