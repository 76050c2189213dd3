#include "dfmm/fixed.hpp"

#include <gtest/gtest.h>

using dfmm::Money;
using dfmm::Units;

TEST(Fixed, IntAndRawRoundTrip) {
    EXPECT_EQ(Money::from_int(3).raw(), static_cast<dfmm::int128>(3'000'000'000'000));
    EXPECT_EQ(Money::from_raw(1).to_string(), "0.000000000001");
    EXPECT_EQ(Money::from_int(-2).to_string(), "-2");
}

TEST(Fixed, FromDoubleRoundsHalfEven) {
    EXPECT_EQ(Money::from_double(0.5e-12).raw(), 0);
    EXPECT_EQ(Money::from_double(1.5e-12).raw(), 2);
    EXPECT_EQ(Money::from_double(-1.5e-12).raw(), -2);
    EXPECT_EQ(Money::from_double(1.25).to_string(), "1.25");
}

TEST(Fixed, ParseInvertsToString) {
    for (const char* s : {"0", "1", "-1", "12.5", "0.000000000001", "-123456.789012345678"}) {
        auto p = Money::parse(s);
        ASSERT_TRUE(p) << s;
        auto back = Money::parse(p->to_string());
        ASSERT_TRUE(back);
        EXPECT_EQ(back->raw(), p->raw()) << s;
    }
    EXPECT_FALSE(Money::parse("abc"));
    EXPECT_FALSE(Money::parse(""));
}

TEST(Fixed, ArithmeticIsExact) {
    Money a = Money::from_double(0.1);
    Money b = Money::from_double(0.2);
    EXPECT_EQ((a + b).raw(), Money::from_double(0.3).raw());
    EXPECT_EQ((a - a).raw(), 0);
    EXPECT_TRUE((a - b).is_negative());
    EXPECT_EQ(dfmm::min(a, b).raw(), a.raw());
    EXPECT_EQ((a - b).abs().raw(), a.raw());
}

TEST(Fixed, UnitsAndMoneyAreDistinctTypes) {
    static_assert(!std::is_same_v<Money, Units>);
    EXPECT_DOUBLE_EQ(Units::from_double(2.5).to_double(), 2.5);
}
