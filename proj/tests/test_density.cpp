#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "zonal/density.hpp"

using namespace zonal;
using Catch::Approx;

namespace {

Region make_region(double pop, double area) {
    Region r;
    r.region_id = "T1";
    r.name = "Test";
    r.level = Level::regency;
    r.province = "P";
    r.population = pop;
    r.admin_area_km2 = area;
    r.case_rate = 100.0;
    return r;
}

}  // namespace

TEST_CASE("meters_per_pixel_side") {
    REQUIRE(meters_per_pixel_side(1.0, 10000) == Approx(10.0));
    REQUIRE(meters_per_pixel_side(4.0, 1) == Approx(2000.0));
    REQUIRE_THROWS_AS(meters_per_pixel_side(1.0, 0), DegenerateError);
    REQUIRE_THROWS_AS(meters_per_pixel_side(-1.0, 10), ValidationError);
}

TEST_CASE("tukey_fence: constant sample collapses") {
    const std::vector<double> ms{10, 10, 10, 10};
    const auto f = tukey_fence(ms);
    REQUIRE(f.q1 == 10.0);
    REQUIRE(f.q3 == 10.0);
    REQUIRE(f.lower == 10.0);
    REQUIRE(f.upper == 10.0);
}

TEST_CASE("tukey_fence: hand-evaluated example with an outlier") {
    const std::vector<double> ms{1, 2, 3, 4, 100};
    const auto f = tukey_fence(ms);
    REQUIRE(f.q1 == Approx(2.0));
    REQUIRE(f.q3 == Approx(4.0));
    REQUIRE(f.lower == Approx(-1.0));
    REQUIRE(f.upper == Approx(7.0));
    REQUIRE_FALSE(f.contains(100.0));
    REQUIRE(mean_excluding_outliers(ms, f) == Approx(2.5));
}

TEST_CASE("tukey_fence: quartile interpolation and order independence") {
    const std::vector<double> shuffled{4, 100, 1, 3, 2};
    const auto f = tukey_fence(shuffled);
    REQUIRE(f.q1 == Approx(2.0));
    REQUIRE(f.q3 == Approx(4.0));
    REQUIRE_THROWS_AS(tukey_fence(std::vector<double>{1, 2, 3}), ValidationError);
}

TEST_CASE("mean_excluding_outliers: fence inert without outliers") {
    const std::vector<double> ms{9.5, 10.0, 10.5, 11.0};
    const auto f = tukey_fence(ms);
    REQUIRE(mean_excluding_outliers(ms, f) == Approx(10.25));
    const std::vector<double> constant{10, 10, 10, 10};
    REQUIRE(mean_excluding_outliers(constant, tukey_fence(constant)) == Approx(10.0));
}

TEST_CASE("settlement_area") {
    REQUIRE(settlement_area(500, 10.0) == Approx(0.05));
    REQUIRE(settlement_area(0, 10.0) == 0.0);
    REQUIRE(settlement_area(1000000, 5.08) == Approx(25.8064));
    REQUIRE_THROWS_AS(settlement_area(10, 0.0), ValidationError);
}

TEST_CASE("densities: direct division cases") {
    // p=1000, x_hat*mbar^2/1e6 = 0.05 km^2 -> settlement density 20000
    const auto rec = densities(make_region(1000.0, 10.0), 5000, 500, 10.0);
    REQUIRE(rec.settlement_area_km2 == Approx(0.05));
    REQUIRE(rec.d_settlement.value() == Approx(20000.0));
    REQUIRE(rec.d_admin == Approx(100.0));
    REQUIRE(rec.d_per_pixel.value() == Approx(0.2));
    REQUIRE(rec.m.value() == Approx(std::sqrt(10.0 * 1e6 / 5000.0)));
}

TEST_CASE("densities: zero settlement leaves the new model undefined") {
    const auto rec = densities(make_region(1000.0, 10.0), 5000, 0, 10.0);
    REQUIRE(rec.settlement_area_km2 == 0.0);
    REQUIRE_FALSE(rec.d_settlement.has_value());
}

TEST_CASE("densities: uninhabited fraction and model ordering") {
    std::mt19937 gen(12);
    std::uniform_real_distribution<double> area(5.0, 500.0);
    std::uniform_int_distribution<std::size_t> px(1000, 100000);
    for (int rep = 0; rep < 30; ++rep) {
        const double A = area(gen);
        const std::size_t x = px(gen);
        const std::size_t x_hat = std::uniform_int_distribution<std::size_t>(0, x)(gen);
        const double m_bar = meters_per_pixel_side(A, x) * 1.001;
        const auto rec = densities(make_region(50000.0, A), x, x_hat, m_bar);
        if (rec.settlement_area_km2 > 0.0 && rec.settlement_area_km2 <= A)
            REQUIRE(rec.d_settlement.value() >= rec.d_admin);  // smaller area, denser
        if (rec.uninhabited_fraction) {
            REQUIRE(*rec.uninhabited_fraction <= 1.0);
            REQUIRE(*rec.uninhabited_fraction ==
                    Approx(1.0 - rec.settlement_area_km2 / A).margin(1e-12));
        }
    }
}

TEST_CASE("densities: old-model density does not depend on the m calibration") {
    const auto region = make_region(123456.0, 78.9);
    const auto a = densities(region, 4000, 900, 10.0);
    const auto b = densities(region, 4000, 900, 987.0);
    REQUIRE(a.d_admin == b.d_admin);
    REQUIRE(a.d_per_pixel == b.d_per_pixel);
}

TEST_CASE("densities: errors") {
    REQUIRE_THROWS_AS(densities(make_region(1000.0, 10.0), 0, 0, 10.0), DegenerateError);
    REQUIRE_THROWS_AS(densities(make_region(1000.0, 10.0), 10, 11, 10.0), ValidationError);
}

TEST_CASE("load_regions_csv: happy path and sorting") {
    const auto path = std::filesystem::temp_directory_path() / "regions_ok.csv";
    {
        std::ofstream f(path);
        f << "region_id,name,level,province,population,admin_area_km2,case_rate_per_100k\n"
             "B2,\"Beta, the second\",municipality,P1,5000,2.5,140\n"
             "A1,Alpha,regency,P1,10000,100,95.5\n";
    }
    const auto regions = load_regions_csv(path.string());
    REQUIRE(regions.size() == 2);
    REQUIRE(regions[0].region_id == "A1");  // sorted by id
    REQUIRE(regions[1].name == "Beta, the second");
    REQUIRE(regions[1].level == Level::municipality);
    REQUIRE_FALSE(regions[0].settlement_area_km2.has_value());
}

TEST_CASE("load_regions_csv: optional settlement column") {
    const auto path = std::filesystem::temp_directory_path() / "regions_sa.csv";
    {
        std::ofstream f(path);
        f << "region_id,name,level,province,population,admin_area_km2,case_rate_per_100k,"
             "settlement_area_km2\n"
             "A1,Alpha,regency,P1,10000,100,95.5,12.25\n";
    }
    const auto regions = load_regions_csv(path.string());
    REQUIRE(regions[0].settlement_area_km2 == 12.25);
    const auto rec = densities_precomputed(regions[0]);
    REQUIRE(rec.d_admin == Approx(100.0));
    REQUIRE(rec.d_settlement.value() == Approx(10000.0 / 12.25));
    REQUIRE(rec.uninhabited_fraction.value() == Approx(1.0 - 0.1225));
}

TEST_CASE("load_regions_csv: validation failures") {
    const auto dir = std::filesystem::temp_directory_path();
    auto write = [&](const char* name, const std::string& body) {
        std::ofstream f(dir / name);
        f << body;
        return (dir / name).string();
    };
    REQUIRE_THROWS_WITH(
        load_regions_csv(write("r_col.csv", "region_id,name,level,province,population\nX,,,,\n")),
        Catch::Matchers::ContainsSubstring("admin_area_km2"));
    REQUIRE_THROWS_AS(
        load_regions_csv(write(
            "r_lvl.csv",
            "region_id,name,level,province,population,admin_area_km2,case_rate_per_100k\n"
            "X,N,village,P,100,10,5\n")),
        ValidationError);
    REQUIRE_THROWS_AS(
        load_regions_csv(write(
            "r_pop.csv",
            "region_id,name,level,province,population,admin_area_km2,case_rate_per_100k\n"
            "X,N,regency,P,0,10,5\n")),
        ValidationError);
    REQUIRE_THROWS_AS(
        load_regions_csv(write(
            "r_dup.csv",
            "region_id,name,level,province,population,admin_area_km2,case_rate_per_100k\n"
            "X,N,regency,P,10,10,5\nX,M,regency,P,20,20,5\n")),
        ValidationError);
    REQUIRE_THROWS_AS(
        load_regions_csv(write(
            "r_num.csv",
            "region_id,name,level,province,population,admin_area_km2,case_rate_per_100k\n"
            "X,N,regency,P,ten,10,5\n")),
        ParseError);
}
