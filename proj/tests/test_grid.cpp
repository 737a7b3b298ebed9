#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wf/errors.hpp"
#include "wf/grid.hpp"

using namespace wf;

namespace {

EdgeFunction random_edge(std::size_t N, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(N + 1);
    for (auto& x : v) x = u(rng);
    return EdgeFunction(std::move(v), 1.0 / static_cast<double>(N));
}

CellFunction random_cell(std::size_t N, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(N);
    for (auto& x : v) x = u(rng);
    return CellFunction(std::move(v), 1.0 / static_cast<double>(N));
}

}  // namespace

TEST_CASE("grid function constructors validate their shape") {
    CHECK_NOTHROW(EdgeFunction({0.0, 0.5, 1.0}, 0.5));
    CHECK_THROWS_AS(EdgeFunction({0.0, 1.0}, 1.0), ContractError);          // N = 1
    CHECK_THROWS_AS(EdgeFunction({0.0, 0.5, 1.0}, 0.4), ContractError);     // h*N != 1
    CHECK_THROWS_AS(EdgeFunction({0.0, 0.5, 1.0}, -0.5), ContractError);
    CHECK_NOTHROW(CellFunction({1.0, 2.0}, 0.5));
    CHECK_THROWS_AS(CellFunction({1.0, 2.0}, 0.3), ContractError);
    CHECK_THROWS_AS(CellFunction(std::vector<double>{}, 0.5), ContractError);
}

TEST_CASE("inner products match hand values and exclude edge endpoints") {
    EdgeFunction l({10.0, 2.0, 3.0, 20.0}, 1.0 / 3.0);
    EdgeFunction g({-7.0, 4.0, 5.0, -9.0}, 1.0 / 3.0);
    // only i = 1, 2 contribute: (2*4 + 3*5)/3
    CHECK(inner_edge(l, g) == doctest::Approx(23.0 / 3.0).epsilon(1e-15));

    CellFunction p({1.0, 2.0, 3.0}, 1.0 / 3.0);
    CellFunction q({4.0, 5.0, 6.0}, 1.0 / 3.0);
    CHECK(inner_cell(p, q) == doctest::Approx(32.0 / 3.0).epsilon(1e-15));

    EdgeFunction other({0.0, 0.5, 1.0}, 0.5);
    CHECK_THROWS_AS(inner_edge(l, other), ContractError);
}

TEST_CASE("difference and average operators on simple inputs") {
    EdgeFunction identity({0.0, 0.25, 0.5, 0.75, 1.0}, 0.25);
    const CellFunction d = diff_edge_to_cell(identity);
    for (double v : d.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

    // difference of a constant is bitwise zero
    EdgeFunction c({3.0, 3.0, 3.0, 3.0, 3.0}, 0.25);
    for (double v : diff_edge_to_cell(c).values) CHECK(v == 0.0);
    for (double v : average_edge_to_cell(c).values) CHECK(v == 3.0);

    CellFunction phi({1.0, 3.0, 6.0, 10.0}, 0.25);
    const EdgeFunction e = diff_cell_to_edge(phi);
    CHECK(e.values.front() == 0.0);  // endpoint slots undefined, stored as 0
    CHECK(e.values.back() == 0.0);
    CHECK(e[1] == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(e[2] == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(e[3] == doctest::Approx(16.0).epsilon(1e-15));
}

TEST_CASE("operators are linear") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t N = 17;
        EdgeFunction a = random_edge(N, rng), b = random_edge(N, rng);
        EdgeFunction sum = a;
        for (std::size_t i = 0; i <= N; ++i) sum.values[i] = 2.0 * a[i] - 3.0 * b[i];
        const CellFunction da = diff_edge_to_cell(a), db = diff_edge_to_cell(b);
        const CellFunction ds = diff_edge_to_cell(sum);
        for (std::size_t i = 0; i < N; ++i)
            CHECK(ds[i] == doctest::Approx(2.0 * da[i] - 3.0 * db[i]).epsilon(1e-12));
    }
}

TEST_CASE("summation by parts holds on random instances") {
    std::mt19937_64 rng(42);
    int instances = 0;
    for (std::size_t N : {2, 5, 17, 100}) {
        for (int rep = 0; rep < 30; ++rep, ++instances) {
            const EdgeFunction l = random_edge(N, rng);
            const CellFunction phi = random_cell(N, rng);
            const double lhs = inner_edge(diff_cell_to_edge(phi), l);
            const double rhs = -inner_cell(phi, diff_edge_to_cell(l)) +
                               phi.values.back() * l.values.back() -
                               phi.values.front() * l.values.front();
            CHECK(std::abs(lhs - rhs) <= 1e-13);
        }
    }
    CHECK(instances >= 100);
}
