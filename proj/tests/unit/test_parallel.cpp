#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "doctest.h"
#include "nlsdbar/parallel.hpp"

TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hit(1000, 0);
    nlsdbar::parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
    for (int h : hit) CHECK(h == 1);
    CHECK_THROWS_AS(nlsdbar::parallel_for(50, [](std::size_t i) {
                        if (i == 17) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    CHECK(nlsdbar::thread_count() >= 1);
}
