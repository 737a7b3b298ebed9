#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wf/kernels.hpp"

using namespace wf::kernels;

namespace {

struct ModeGuard {
    Mode saved = mode();
    ~ModeGuard() { set_mode(saved); }
};

}  // namespace

TEST_CASE("mode flag round-trips") {
    ModeGuard guard;
    set_mode(Mode::Serial);
    CHECK(mode() == Mode::Serial);
    set_mode(Mode::Parallel);
    CHECK(mode() == Mode::Parallel);
}

TEST_CASE("block_sum equals plain accumulation below one block") {
    std::vector<double> v(100);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& x : v) x = u(rng);
    double plain = 0.0;
    for (double x : v) plain += x;
    CHECK(block_sum(v.size(), [&](std::size_t i) { return v[i]; }) == plain);
}

TEST_CASE("serial and parallel reductions are bitwise identical") {
    ModeGuard guard;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {1, 2047, 2048, 2049, 100000, 1048577}) {
        std::vector<double> v(n);
        for (auto& x : v) x = u(rng);
        set_mode(Mode::Serial);
        const double a = block_sum(n, [&](std::size_t i) { return v[i]; });
        set_mode(Mode::Parallel);
        const double b = block_sum(n, [&](std::size_t i) { return v[i]; });
        CHECK(a == b);  // bitwise, by the blocked reduction contract
    }
}

TEST_CASE("for_each covers every index in both modes") {
    ModeGuard guard;
    const std::size_t n = 50000;
    std::vector<double> serial(n, 0.0), parallel(n, 0.0);
    set_mode(Mode::Serial);
    for_each(n, [&](std::size_t i) { serial[i] = std::sin(static_cast<double>(i)); });
    set_mode(Mode::Parallel);
    for_each(n, [&](std::size_t i) { parallel[i] = std::sin(static_cast<double>(i)); });
    CHECK(serial == parallel);
}

TEST_CASE("block_min finds the minimum") {
    std::vector<double> v{5.0, -2.0, 3.5, -2.5, 8.0};
    CHECK(block_min(v.size(), [&](std::size_t i) { return v[i]; }) == -2.5);
}
