#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "votenoise/errors.hpp"
#include "votenoise/ingest.hpp"
#include "votenoise/rules.hpp"

using namespace votenoise;

namespace {

PreferenceProfile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_profile(in);
}

std::string write(const PreferenceProfile& p) {
  std::ostringstream out;
  write_profile(out, p);
  return out.str();
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

template <typename Table, typename Reader>
Table read_csv(Reader reader, const std::string& text) {
  std::istringstream in(text);
  return reader(in);
}

PreferenceProfile districts(const std::string& text) {
  return districts_to_profile(read_csv<DistrictReturnsTable>(read_district_returns, text));
}

PreferenceProfile races(const std::string& text) {
  return races_to_profile(read_csv<RaceResultsTable>(read_race_results, text));
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("profile file examples") {
    const auto p = parse("# candidates: a,b,c\n# m: 3\n2: 0,1,2\n");
    CHECK(p.num_voters() == 2);
    CHECK(p.ballot(0) == Ballot{0, 1, 2});
    CHECK(p.ballot(1) == Ballot{0, 1, 2});

    const auto t = parse("# candidates: a,b,c\n# m: 3\n1: 2,0\n");
    CHECK(t.ballot(0).length() == 2);

    const auto e = parse("# candidates: a,b,c\n# m: 3\n50: 0,1,2\n49: 1,2,0\n");
    const auto w = positional_winners(e, RuleSpec::plurality(3));
    CHECK(w.scores[0] == 50);
    CHECK(w.scores[1] == 49);
  }

  TEST_CASE("profile format is exact") {
    const auto p = PreferenceProfile({"x", "y", "z"},
                                     {Ballot{2, 0, 1}, Ballot{2, 0, 1}, Ballot{2, 0, 1}, Ballot{1}});
    CHECK(write(p) == "# candidates: x,y,z\n# m: 3\n3: 2,0,1\n1: 1\n");
    const auto same = PreferenceProfile({"x", "y"}, {Ballot{0, 1}, Ballot{0, 1}, Ballot{0, 1}});
    CHECK(write(same) == "# candidates: x,y\n# m: 2\n3: 0,1\n");
  }

  TEST_CASE("parse errors carry line numbers") {
    CHECK(parse_error_line("# candidates: a,b\n# m: 2\n1: 0,2\n") == 3);
    CHECK(parse_error_line("# candidates: a,b\n# m: 2\n1: 0,0\n") == 3);
    CHECK(parse_error_line("# candidates: a,b\n# m: 2\n0: 0,1\n") == 3);
    CHECK(parse_error_line("# candidates: a,b\n# m: 2\nx: 0,1\n") == 3);
    CHECK(parse_error_line("# candidates: a,b\n# m: 2\n1 0,1\n") == 3);
    CHECK(parse_error_line("# candidates: a,b\n# voters: 2\n") == 2);
    CHECK(parse_error_line("1: 0,1\n") == 1);
    CHECK(parse_error_line("# candidates: a,b\n# m: 2\n1: 0,1\n# m: 2\n") == 4);
    CHECK(parse_error_line("# candidates: a,b\n# m: 3\n1: 0,1\n") == 0);
    CHECK(parse_error_line("# candidates: a,b\n# m: 2\n") == 0);
    CHECK(parse_error_line("# candidates: a,a\n# m: 2\n1: 0\n") == 0);
    CHECK(parse_error_line("# candidates: a,b\n# m: 2\n1: \n") == 3);
  }

  TEST_CASE("blank lines and surrounding spaces are tolerated") {
    const auto p = parse("\n# candidates: a, b\n\n#m:2\n  1 :  1 , 0 \n\n");
    CHECK(p.candidate_names() == std::vector<std::string>{"a", "b"});
    CHECK(p.ballot(0) == Ballot{1, 0});
  }

  TEST_CASE("unwritable names are rejected") {
    CHECK_THROWS_AS(write(PreferenceProfile({"a,b", "c"}, {Ballot{0}})), std::invalid_argument);
    CHECK_THROWS_AS(write(PreferenceProfile({" a", "c"}, {Ballot{0}})), std::invalid_argument);
  }

  TEST_CASE("round trip preserves structure and truncation") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
      const auto p = oracle::random_profile(5, 20, rng, trial % 2 == 0);
      const auto q = parse(write(p));
      CHECK(q == p);
      CHECK(write(q) == write(p));
      for (std::size_t i = 0; i < q.num_voters(); ++i) CHECK(q.ballot(i).length() == p.ballot(i).length());
    }
  }

  TEST_CASE("only consecutive identical ballots share a line") {
    const auto p = PreferenceProfile::with_default_names(
        3, {Ballot{1, 0}, Ballot{1, 0}, Ballot{2}, Ballot{1, 0}, Ballot{2}, Ballot{2}});
    const auto groups = group_ballots(p);
    REQUIRE(groups.size() == 4);
    CHECK(groups[0].second == 2);
    CHECK(groups[3].first == Ballot{2});
    CHECK(groups[3].second == 2);
    CHECK(write(p) == "# candidates: c0,c1,c2\n# m: 3\n2: 1,0\n1: 2\n1: 1,0\n2: 2\n");
  }

  TEST_CASE("district returns by votes") {
    const auto one = districts("district,party,votes\nD1,P,100\nD1,Q,80\n");
    CHECK(one.num_voters() == 1);
    CHECK(one.candidate_names() == std::vector<std::string>{"P", "Q"});
    CHECK(one.ballot(0) == Ballot{0, 1});
    CHECK(positional_winners(one, RuleSpec::plurality(2)).scores[0] == 1);

    const auto three = districts(
        "district,party,votes\n"
        "A,P,10\nA,Q,20\nB,Q,5\nB,P,3\nB,R,1\nC,P,9\nC,R,7\n");
    const auto seats = positional_winners(three, RuleSpec::plurality(3)).scores;
    CHECK(seats[1] == 2);
    CHECK(std::accumulate(seats.begin(), seats.end(), 0.0) == 3);
  }

  TEST_CASE("district returns by rank, any column order") {
    const auto p = districts("rank,party,district\n2,Q,X\n1,P,X\n1,Q,Y\n");
    CHECK(p.ballot(0) == Ballot{1, 0});
    CHECK(p.ballot(1) == Ballot{0});
  }

  TEST_CASE("district errors") {
    CHECK_THROWS_AS(districts("district,party,votes\nA,P,10\nA,Q,10\n"), ParseError);
    CHECK_THROWS_AS(districts("district,party,votes\nA,P,10\nA,P,5\n"), ParseError);
    CHECK_THROWS_AS(districts("district,party,rank\nA,P,1\nA,Q,3\n"), ParseError);
    CHECK_THROWS_AS(districts("district,party,votes,rank\nA,P,10,1\n"), ParseError);
    CHECK_THROWS_AS(districts("district,party\nA,P\n"), ParseError);
    CHECK_THROWS_AS(districts("district,party,votes\nA,P,ten\n"), ParseError);
    CHECK_THROWS_AS(districts("district,party,votes\nA,P\n"), ParseError);
    CHECK_THROWS_AS(districts(""), ParseError);
    try {
      districts("district,party,votes\nA,P,10\nB,P,4\nA,Q,10\n");
      FAIL("expected a tie error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
    }
  }

  TEST_CASE("district CSV dialect details") {
    const auto p = districts("\xEF\xBB\xBF" "District,Party,Votes\r\n\"North, East\",\"Labour \"\"Co-op\"\"\",12\r\n");
    CHECK(p.candidate_names() == std::vector<std::string>{"Labour \"Co-op\""});
  }

  TEST_CASE("race results") {
    const auto one = races("race,position,driver\nR1,2,B\nR1,1,A\nR1,3,C\n");
    CHECK(one.num_voters() == 1);
    CHECK(one.ballot(0) == Ballot{1, 0, 2});

    const auto two = races("race,position,driver\nR1,1,A\nR1,2,D\nR2,1,B\nR2,2,A\n");
    CHECK(two.ballot(0).length() == 2);
    CHECK(two.ballot(1).length() == 2);
    CHECK(two.ballot(1).positions(3)[1] == kUnranked);

    CHECK_THROWS_AS(races("race,position,driver\nR1,1,A\nR1,1,B\n"), ParseError);
    CHECK_THROWS_AS(races("race,position,driver\nR1,1,A\nR1,2,A\n"), ParseError);
    CHECK_THROWS_AS(races("race,position,driver\nR1,1,A\nR1,3,B\n"), ParseError);
    CHECK_THROWS_AS(races("race,driver\nR1,A\n"), ParseError);
  }

  TEST_CASE("race ballot length equals finishers per race") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 30; ++trial) {
      std::string csv = "driver,race,position\n";
      std::vector<std::size_t> finishers;
      for (int r = 0; r < 5; ++r) {
        std::vector<int> drivers(8);
        std::iota(drivers.begin(), drivers.end(), 0);
        std::shuffle(drivers.begin(), drivers.end(), rng);
        const std::size_t k = 1 + rng() % 8;
        finishers.push_back(k);
        for (std::size_t pos = 0; pos < k; ++pos) {
          csv += "d" + std::to_string(drivers[pos]) + ",r" + std::to_string(r) + "," + std::to_string(pos + 1) + "\n";
        }
      }
      const auto p = races(csv);
      REQUIRE(p.num_voters() == 5);
      for (std::size_t i = 0; i < 5; ++i) CHECK(p.ballot(i).length() == finishers[i]);
    }
  }

  TEST_CASE("minimum average length filter") {
    const auto p = PreferenceProfile::with_default_names(4, {Ballot{0, 1, 2}, Ballot{3, 1}});
    CHECK(meets_min_average_length(p, 2.5));
    CHECK_FALSE(meets_min_average_length(p, 3.0));
  }
}
