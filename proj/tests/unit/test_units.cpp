#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "modulecad/number_format.hpp"
#include "modulecad/units.hpp"
#include "test_support.hpp"

using namespace modulecad;

TEST(UnitsTest, Examples) {
    EXPECT_DOUBLE_EQ(convert_unit(2500, "mm", "m"), 2.5);
    EXPECT_DOUBLE_EQ(convert_unit(1, "kPa", "Pa"), 1000);
    EXPECT_DOUBLE_EQ(convert_unit(3, "t", "kg"), 3000);
    EXPECT_DOUBLE_EQ(convert_unit(7, "cm", "cm"), 7);
    EXPECT_ERROR_CODE(convert_unit(5, "mm", "kg"), ErrorCode::dimension_mismatch);
    EXPECT_ERROR_CODE(convert_unit(5, "mm", "inch"), ErrorCode::unknown_unit);
    EXPECT_ERROR_CODE(convert_unit(5, "", "mm"), ErrorCode::unknown_unit);
}

TEST(UnitsTest, DimensionOf) {
    EXPECT_EQ(dimension_of("MPa"), "pressure");
    EXPECT_EQ(dimension_of("t"), "mass");
    EXPECT_EQ(dimension_of("cm"), "length");
    EXPECT_ERROR_CODE(dimension_of("ft"), ErrorCode::unknown_unit);
}

TEST(UnitsTest, TableShape) {
    std::size_t units = 0;
    for (const auto& dim : unit_table()) {
        units += dim.units.size();
        int base = 0;
        for (const auto& u : dim.units) base += u.factor == 1.0 ? 1 : 0;
        EXPECT_EQ(base, 1) << dim.name;
    }
    EXPECT_EQ(units, 8u);
}

TEST(UnitsTest, RoundTripProperty) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> exponent(-6, 9);
    for (const auto& dim : unit_table()) {
        for (const auto& a : dim.units) {
            for (const auto& b : dim.units) {
                for (int i = 0; i < 50; ++i) {
                    const double v = std::pow(10.0, exponent(rng)) * (i % 2 ? -1 : 1);
                    const double back = convert_unit(convert_unit(v, a.name, b.name), b.name, a.name);
                    EXPECT_LE(std::abs(back - v), 1e-12 * std::abs(v)) << a.name << "->" << b.name;
                }
            }
        }
    }
}

TEST(NumberFormatTest, Shortest) {
    EXPECT_EQ(format_shortest(0.1), "0.1");
    EXPECT_EQ(format_shortest(-0.0), "0");
    EXPECT_EQ(format_shortest(1e21), "1e+21");
    EXPECT_EQ(format_shortest(12000), "12000");
    EXPECT_EQ(format_shortest(9.200000000000001), "9.200000000000001");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng);
        EXPECT_EQ(std::stod(format_shortest(v)), v);
    }
}

TEST(NumberFormatTest, Decimal) {
    EXPECT_EQ(format_decimal(1.5), "1.5");
    EXPECT_EQ(format_decimal(15.0), "15");
    EXPECT_EQ(format_decimal(6.3000000000000007), "6.3");
    EXPECT_EQ(format_decimal(2.0 / 3.0, 3), "0.667");
    EXPECT_EQ(format_decimal(-0.0000001), "0");
    EXPECT_EQ(format_decimal(100), "100");
}

TEST(NumberFormatTest, RoundHalfAway) {
    EXPECT_DOUBLE_EQ(round_half_away(2.5, 0), 3);
    EXPECT_DOUBLE_EQ(round_half_away(-2.5, 0), -3);
    EXPECT_DOUBLE_EQ(round_half_away(1.2345, 3), 1.235);
    EXPECT_DOUBLE_EQ(round_half_away(14.1421356, 3), 14.142);
}
