#include "sybilsim/errors.hpp"
#include "sybilsim/types.hpp"

#include <doctest.h>

#include <sstream>
#include <unordered_set>

using namespace sybilsim;

TEST_CASE("amount text round trip")
{
    for (auto s : {"0", "1", "-3", "2/3", "-7/12", "123456789012345678901/7"})
        CHECK(formatAmount(parseAmount(s)) == s);
}

TEST_CASE("amount parsing")
{
    CHECK(parseAmount("0.034") == makeAmount(17, 500));
    CHECK(parseAmount("6/4") == makeAmount(3, 2));
    CHECK(parseAmount(".5") == makeAmount(1, 2));
    CHECK(parseAmount("5.") == 5);
    CHECK(parseAmount("1e-05") == makeAmount(1, 100000));
    CHECK(parseAmount("2.5E3") == 2500);
    CHECK(parseAmount("+4") == 4);
    // leading zeros are decimal, not octal
    CHECK(parseAmount("010") == 10);
    CHECK(parseAmount("010/08") == makeAmount(5, 4));
    CHECK(parseAmount("0.0017") == makeAmount(17, 10000));
    for (auto bad : {"", "x", "1/0", "1/", "/2", "1.2.3", "1e", "--1", "1/2/3", "0x10"})
    {
        CAPTURE(bad);
        CHECK_THROWS_AS(parseAmount(bad), std::invalid_argument);
    }
}

TEST_CASE("decimal rendering")
{
    CHECK(formatAmountDecimal(makeAmount(1, 4)) == "0.25");
    CHECK(formatAmountDecimal(makeAmount(50000, 1)) == "50000");
}

TEST_CASE("sign and approxEqual are exact in the rational build")
{
    CHECK(kExactArithmetic);
    CHECK(sign(makeAmount(-1, 1000000000)) == -1);
    CHECK(sign(Amount(0)) == 0);
    CHECK_FALSE(approxEqual(makeAmount(1, 3), makeAmount(333333, 1000000)));
}

TEST_CASE("node types")
{
    CHECK(parseTypeLetter("H") == NodeType::Honest);
    CHECK(parseTypeLetter("C") == NodeType::Corrupt);
    CHECK(parseTypeLetter("S") == NodeType::Sybil);
    CHECK_THROWS_AS(parseTypeLetter("X"), std::invalid_argument);
    CHECK(isGenuine(NodeType::Corrupt));
    CHECK_FALSE(isGenuine(NodeType::Sybil));
    CHECK(forbiddenPair(NodeType::Honest, NodeType::Sybil));
    CHECK(forbiddenPair(NodeType::Sybil, NodeType::Honest));
    CHECK_FALSE(forbiddenPair(NodeType::Corrupt, NodeType::Sybil));
    CHECK_FALSE(forbiddenPair(NodeType::Honest, NodeType::Honest));

    TypeCounts c{60, 40, 20};
    CHECK(c.total() == 120);
    CHECK(c.genuine() == 100);
    CHECK(c.of(NodeType::Sybil) == 20);

    std::unordered_set<NodeId> ids{NodeId{1}, NodeId{2}, NodeId{1}};
    CHECK(ids.size() == 2);
    std::ostringstream os;
    os << NodeId{42};
    CHECK(os.str() == "42");
}
