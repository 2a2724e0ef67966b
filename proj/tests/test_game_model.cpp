#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "drcg/coalition.hpp"
#include "drcg/game.hpp"

using namespace drcg;

namespace {

game_spec reference_game(double grand_value = 12.0) {
    std::map<coalition_id, piecewise_affine_value> values;
    auto affine = [](double b) {
        return piecewise_affine_value({affine_piece{{1.0}, b}});
    };
    values.emplace(coalition_of({1}, 3), affine(2.0));
    values.emplace(coalition_of({2}, 3), affine(1.5));
    values.emplace(coalition_of({3}, 3), affine(2.5));
    values.emplace(coalition_of({1, 2}, 3), affine(6.0));
    values.emplace(coalition_of({2, 3}, 3), affine(6.5));
    values.emplace(coalition_of({1, 3}, 3), affine(7.0));
    return game_spec(3, grand_value, box_support({0.0}, {1.0}), std::move(values));
}

} // namespace

TEST_CASE("subcoalition enumeration") {
    const auto three = enumerate_subcoalitions(3);
    REQUIRE(three == std::vector<coalition_id>{1, 2, 3, 4, 5, 6});
    REQUIRE(three.size() == 6);

    const auto two = enumerate_subcoalitions(2);
    REQUIRE(two == std::vector<coalition_id>{1, 2});

    for (int n : {2, 3, 4, 5, 6}) {
        const auto all = enumerate_subcoalitions(n);
        REQUIRE(all.size() == (std::size_t{1} << n) - 2);
        for (coalition_id s : all) {
            REQUIRE(s != 0);
            REQUIRE(s != grand_coalition(n));
        }
    }

    CHECK_THROWS_AS(enumerate_subcoalitions(1), config_error);
    CHECK_THROWS_AS(enumerate_subcoalitions(21), config_error);
}

TEST_CASE("reference game covers the six named coalitions") {
    const auto game = reference_game();
    const auto subs = enumerate_subcoalitions(game);
    REQUIRE(subs.size() == 6);
    CHECK(game.value(coalition_of({1}, 3))(0.0) == 2.0);
    CHECK(game.value(coalition_of({2}, 3))(0.0) == 1.5);
    CHECK(game.value(coalition_of({3}, 3))(0.0) == 2.5);
    CHECK(game.value(coalition_of({1, 2}, 3))(0.0) == 6.0);
    CHECK(game.value(coalition_of({2, 3}, 3))(0.0) == 6.5);
    CHECK(game.value(coalition_of({1, 3}, 3))(0.0) == 7.0);
}

TEST_CASE("value evaluation") {
    const piecewise_affine_value single({affine_piece{{1.0}, 2.0}});
    CHECK(single(0.5) == Catch::Approx(2.5).margin(1e-15));

    const piecewise_affine_value two({affine_piece{{2.0}, 1.0}, affine_piece{{-3.0}, 0.0}});
    CHECK(two(0.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(two(-1.0) == Catch::Approx(3.0).margin(1e-15));

    const std::vector<double> wrong_dim{0.5, 0.5};
    CHECK_THROWS_AS(single(std::span<const double>(wrong_dim)), input_error);
}

TEST_CASE("lipschitz constants") {
    const piecewise_affine_value single({affine_piece{{1.0}, 2.0}});
    CHECK(single.lipschitz_constant(norm_tag::euclidean) == 1.0);

    const piecewise_affine_value two({affine_piece{{2.0}, 1.0}, affine_piece{{-3.0}, 0.0}});
    CHECK(two.lipschitz_constant(norm_tag::euclidean) == 3.0);

    // 1-norm ground: the dual is the max norm
    const piecewise_affine_value planar({affine_piece{{1.0, -2.0}, 0.0}});
    CHECK(planar.lipschitz_constant(norm_tag::one) == 2.0);
}

TEST_CASE("lipschitz bound holds on random pairs") {
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_real_distribution<double> coef(-4.0, 4.0);
    for (int rep = 0; rep < 40; ++rep) {
        const int p = 1 + static_cast<int>(eng() % 3);
        const int m = 1 + static_cast<int>(eng() % 3);
        std::vector<affine_piece> pieces;
        for (int i = 0; i < m; ++i) {
            std::vector<double> a(p);
            for (double& v : a) v = coef(eng);
            pieces.push_back({std::move(a), coef(eng)});
        }
        const piecewise_affine_value u(pieces);
        for (norm_tag nt : {norm_tag::one, norm_tag::max, norm_tag::euclidean}) {
            const double L = u.lipschitz_constant(nt);
            for (int t = 0; t < 25; ++t) {
                std::vector<double> x(p), y(p), d(p);
                for (int j = 0; j < p; ++j) {
                    x[j] = unif(eng);
                    y[j] = unif(eng);
                    d[j] = x[j] - y[j];
                }
                const double lhs = std::abs(u(x) - u(y));
                REQUIRE(lhs <= L * norm_of(d, nt) + 1e-12);
            }
        }
    }
}

TEST_CASE("value is convex along segments") {
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const piecewise_affine_value u(
        {affine_piece{{2.0, 1.0}, 0.5}, affine_piece{{-1.0, 3.0}, -0.25},
         affine_piece{{0.0, -2.0}, 1.0}});
    for (int t = 0; t < 200; ++t) {
        std::vector<double> x{unif(eng), unif(eng)}, y{unif(eng), unif(eng)};
        std::vector<double> mid{0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1])};
        REQUIRE(u(mid) <= 0.5 * (u(x) + u(y)) + 1e-12);
    }
}

TEST_CASE("game JSON round-trips bit-exactly") {
    const auto game = reference_game(12.0 + 1e-13);
    const auto j = game.to_json();
    const auto back = game_spec::from_json(j);
    REQUIRE(back == game);

    // through text as well: serialize, parse, compare
    const std::string text = j.dump();
    const auto reparsed = game_spec::from_json(nlohmann::json::parse(text));
    REQUIRE(reparsed == game);
}

TEST_CASE("game validation rejects incomplete coalition maps") {
    std::map<coalition_id, piecewise_affine_value> values;
    values.emplace(coalition_id{1}, piecewise_affine_value({affine_piece{{1.0}, 0.0}}));
    CHECK_THROWS_AS(game_spec(2, 1.0, box_support({0.0}, {1.0}), std::move(values)),
                    config_error);
    CHECK_THROWS_AS(box_support({1.0}, {0.0}), config_error);
}
