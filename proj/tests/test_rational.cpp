#include "patsp/rational.hpp"

#include <gtest/gtest.h>

using namespace patsp;

TEST(Rational, ParsesIntegersAndFractions) {
    EXPECT_EQ(parse_rat("3"), Rat(3));
    EXPECT_EQ(parse_rat("-3"), Rat(-3));
    EXPECT_EQ(parse_rat("+7"), Rat(7));
    EXPECT_EQ(parse_rat("6/4"), make_rat(3, 2));
    EXPECT_EQ(parse_rat("-2/6"), make_rat(-1, 3));
}

TEST(Rational, CanonicalTextForm) {
    EXPECT_EQ(to_string(parse_rat("6/4")), "3/2");
    EXPECT_EQ(to_string(parse_rat("4/2")), "2");
    EXPECT_EQ(to_string(make_rat(0, 5)), "0");
}

TEST(Rational, RejectsMalformedInput) {
    for (const char *bad : {"", "1/0", "a", "1/", "/2", "1/-2", " 1", "1.5", "--1"}) {
        EXPECT_THROW(parse_rat(bad), ParseError) << bad;
    }
    EXPECT_THROW(make_rat(1, 0), std::invalid_argument);
}

TEST(Rational, StaysCanonicalUnderArithmetic) {
    Rat a = make_rat(1, 6) + make_rat(1, 3);
    EXPECT_EQ(a, make_rat(1, 2));
    EXPECT_EQ(a.get_den(), 2);
    Rat b = make_rat(-4, -6);
    EXPECT_EQ(b.get_num(), 2);
    EXPECT_EQ(b.get_den(), 3);
    EXPECT_TRUE(is_integral(make_rat(8, 4)));
    EXPECT_FALSE(is_integral(make_rat(8, 3)));
}
