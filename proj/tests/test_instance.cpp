#include "patsp/instance.hpp"

#include <gtest/gtest.h>

using namespace patsp;

namespace {

const char *kFour = "ATSP tiny 4\n"
                    "* 1 2 3\n"
                    "4 * 7/2 6\n"
                    "7 8 * 9\n"
                    "10 11 12 *\n";

} // namespace

TEST(Instance, ParsesAndRoundTrips) {
    const Instance inst = parse_instance(kFour);
    EXPECT_EQ(inst.name, "tiny");
    EXPECT_EQ(inst.n, 4);
    EXPECT_EQ(inst.costs.size(), 12U);
    EXPECT_EQ(inst.cost(2, 3), make_rat(7, 2));
    EXPECT_EQ(inst.cost(4, 1), Rat(10));
    EXPECT_EQ(format_instance(inst), kFour);
}

TEST(Instance, CommentsAndProvenance) {
    const Instance g = gen_instance(5, 42, GenMode::uniform);
    const std::string text = format_instance(g);
    EXPECT_NE(text.find("# seed 42 uniform\n"), std::string::npos);
    const Instance back = parse_instance(text);
    ASSERT_TRUE(back.provenance);
    EXPECT_EQ(back.provenance->seed, 42U);
    EXPECT_EQ(format_instance(back), text);
    EXPECT_EQ(parse_instance("# leading comment\n\n" + std::string(kFour)).n, 4);
}

TEST(Instance, Errors) {
    try {
        parse_instance("ATSP bad 4\n* 1 2 3\n4 5 6 7\n7 8 * 9\n10 11 12 *\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("line 3, column 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_instance("ATSP bad 4\n* 1 2\n"), ParseError);
    EXPECT_THROW(parse_instance("ATSP bad 4\n* 1 2 x\n4 * 5 6\n7 8 * 9\n10 11 12 *\n"), ParseError);
    EXPECT_THROW(parse_instance("ATSP bad 4\n* 1 2 3\n"), ParseError);
    EXPECT_THROW(parse_instance("TSP bad 4\n"), ParseError);
    EXPECT_THROW(parse_instance("ATSP small 3\n* 1 2\n3 * 4\n5 6 *\n"), DomainError);
    EXPECT_THROW(read_instance("/nonexistent/file.atsp"), std::runtime_error);
}

TEST(Instance, GeneratorsAreDeterministic) {
    for (GenMode mode : {GenMode::uniform, GenMode::euclidean_asym}) {
        EXPECT_EQ(format_instance(gen_instance(6, 7, mode)), format_instance(gen_instance(6, 7, mode)));
        EXPECT_NE(format_instance(gen_instance(6, 7, mode)), format_instance(gen_instance(6, 8, mode)));
    }
    const Instance u = gen_instance(7, 3, GenMode::uniform);
    for (const Rat &c : u.costs) {
        EXPECT_TRUE(is_integral(c));
        EXPECT_GE(c, 1);
        EXPECT_LE(c, 100);
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Instance e = gen_instance(5, seed, GenMode::euclidean_asym);
        bool asymmetric = false;
        for (int i = 1; i <= 5; ++i) {
            for (int j = i + 1; j <= 5; ++j) {
                asymmetric = asymmetric || e.cost(i, j) != e.cost(j, i);
            }
        }
        EXPECT_TRUE(asymmetric);
    }
    EXPECT_THROW(gen_instance(3, 1, GenMode::uniform), DomainError);
    EXPECT_THROW(gen_instance(10, 1, GenMode::uniform), CapacityError);
    EXPECT_THROW(parse_gen_mode("gaussian"), std::invalid_argument);
}
