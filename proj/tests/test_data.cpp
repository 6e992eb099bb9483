#include "doctest.h"

#include "hospsim/data.hpp"
#include "hospsim/errors.hpp"

#include <sstream>

using namespace hospsim;

TEST_CASE("date parsing accepts the calendar and nothing else") {
    const Date d = Date::parse("2020-11-09");
    CHECK(d.year == 2020);
    CHECK(d.month == 11);
    CHECK(d.day == 9);
    CHECK(Date::parse("2020-02-29") == Date{2020, 2, 29}); // leap year
    for (const char* bad : {"2021-02-29", "2020-13-01", "2020-00-10", "2020-1-05",
                            "20-01-05", "2020/01/05", "2020-01-32", "garbage", ""})
        CHECK_THROWS_AS(Date::parse(bad), DataError);
}

TEST_CASE("date arithmetic round trips through day numbers") {
    const Date a = Date::parse("2020-10-12");
    const Date b = Date::parse("2020-11-09");
    CHECK(b - a == 28);
    CHECK(a.plus_days(28) == b);
    CHECK(Date::from_days(a.to_days()) == a);
    CHECK(Date::parse("2020-12-31").plus_days(1) == Date::parse("2021-01-01"));
    CHECK(a < b);
    CHECK(a.to_string() == "2020-10-12");
}

TEST_CASE("case parser keeps good rows and reports bad ones") {
    const std::string text =
        "date,age,gender,region\n"
        "2020-10-12,64,male,north\n"
        "2020-10-12,abc,male,north\n"
        "2020-10-13,40,FEMALE,south\n"
        "2020-10-14,200,female,north\n"
        "2020-10-15,55,unknown,north\n";

    SUBCASE("lenient mode") {
        std::istringstream in(text);
        CaseParseResult result = parse_cases(in, ParseMode::Lenient);
        REQUIRE(result.records.size() == 2);
        CHECK(result.records[0].age == 64);
        CHECK(result.records[0].gender == Gender::Male);
        CHECK(result.records[1].gender == Gender::Female);
        REQUIRE(result.issues.size() == 3);
        CHECK(result.issues[0].line == 3);
        CHECK(result.issues[1].line == 5);
        CHECK(result.issues[2].line == 6);
    }
    SUBCASE("strict mode lists every offending line") {
        std::istringstream in(text);
        try {
            parse_cases(in, ParseMode::Strict);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("3") != std::string::npos);
            CHECK(msg.find("5") != std::string::npos);
            CHECK(msg.find("6") != std::string::npos);
        }
    }
}

TEST_CASE("case parser requires the exact header") {
    std::istringstream in("date,age,sex,region\n2020-01-01,50,male,x\n");
    CHECK_THROWS_AS(parse_cases(in), DataError);
}

TEST_CASE("case records round trip through write_cases") {
    std::vector<CaseRecord> records{
        {Date::parse("2020-10-12"), 64, Gender::Male, "north"},
        {Date::parse("2020-10-13"), 40, Gender::Female, "south"},
    };
    std::ostringstream out;
    write_cases(records, out);
    std::istringstream in(out.str());
    CaseParseResult back = parse_cases(in);
    CHECK(back.records == records);
}

TEST_CASE("field parser enforces contiguous sorted dates") {
    SUBCASE("clean input") {
        std::istringstream in("date,bed,icu,vent\n2020-11-09,5,2,1\n2020-11-10,6,2,1\n");
        FieldParseResult r = parse_field(in);
        REQUIRE(r.records.size() == 2);
        CHECK(r.warnings.empty());
        CHECK(r.records[1].bed == 6);
    }
    SUBCASE("gap names the missing date") {
        std::istringstream in("date,bed,icu,vent\n2020-11-09,5,2,1\n2020-11-11,6,2,1\n");
        try {
            parse_field(in);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("2020-11-10") != std::string::npos);
        }
    }
    SUBCASE("duplicate date") {
        std::istringstream in("date,bed,icu,vent\n2020-11-09,5,2,1\n2020-11-09,6,2,1\n");
        CHECK_THROWS_AS(parse_field(in), DataError);
    }
    SUBCASE("negative count") {
        std::istringstream in("date,bed,icu,vent\n2020-11-09,-5,2,1\n");
        CHECK_THROWS_AS(parse_field(in), DataError);
    }
    SUBCASE("unsorted rows are sorted with a warning") {
        std::istringstream in("date,bed,icu,vent\n2020-11-10,6,2,1\n2020-11-09,5,2,1\n");
        FieldParseResult r = parse_field(in);
        REQUIRE(r.records.size() == 2);
        CHECK(!r.warnings.empty());
        CHECK(r.records[0].date == Date::parse("2020-11-09"));
    }
}

TEST_CASE("field records round trip through write_field") {
    std::vector<FieldRecord> records{
        {Date::parse("2020-11-09"), 5, 2, 1},
        {Date::parse("2020-11-10"), 6, 3, 2},
    };
    std::ostringstream out;
    write_field(records, out);
    std::istringstream in(out.str());
    FieldParseResult back = parse_field(in);
    CHECK(back.records == records);
}

namespace {

std::vector<CaseRecord> demo_cases() {
    std::vector<CaseRecord> cases;
    for (int k = 0; k < 95; ++k) {
        CaseRecord r;
        r.date = Date::parse("2020-10-12").plus_days(k);
        r.age = 50 + k % 20;
        r.gender = k % 2 == 0 ? Gender::Male : Gender::Female;
        r.region = k % 3 == 0 ? "south" : "north";
        cases.push_back(r);
    }
    return cases;
}

std::vector<FieldRecord> demo_field() {
    std::vector<FieldRecord> field;
    for (int k = 0; k < 67; ++k) {
        FieldRecord r;
        r.date = Date::parse("2020-11-09").plus_days(k);
        r.bed = 5 + k % 7;
        r.icu = 2;
        r.vent = 1;
        field.push_back(r);
    }
    return field;
}

} // namespace

TEST_CASE("build_scenario computes warmup and horizon from the windows") {
    Scenario s = build_scenario(demo_cases(), demo_field(), "", Date::parse("2020-10-12"),
                                Date::parse("2021-01-14"), Date::parse("2020-11-09"),
                                Date::parse("2021-01-14"));
    CHECK(s.warmup_days == 28);
    CHECK(s.horizon() == 95);
    CHECK(s.eval_days() == 67);
    CHECK(s.field_day_index(0) == 28);
    CHECK(s.field_day_index(66) == 94);
    CHECK(s.arrivals.total_patients() == 95);
    // Day 0 holds the case dated at the window start.
    CHECK(s.arrivals.per_day[0].size() == 1);
    CHECK(s.arrivals.per_day[0][0].age == 50.0);
    CHECK(s.arrivals.per_day[0][0].male);
}

TEST_CASE("build_scenario filters by region") {
    Scenario s = build_scenario(demo_cases(), demo_field(), "south", Date::parse("2020-10-12"),
                                Date::parse("2021-01-14"), Date::parse("2020-11-09"),
                                Date::parse("2021-01-14"));
    CHECK(s.arrivals.total_patients() == 32); // ceil(95 / 3)
    CHECK_THROWS_AS(build_scenario(demo_cases(), demo_field(), "nowhere",
                                   Date::parse("2020-10-12"), Date::parse("2021-01-14"),
                                   Date::parse("2020-11-09"), Date::parse("2021-01-14")),
                    DataError);
}

TEST_CASE("build_scenario rejects inconsistent windows") {
    CHECK_THROWS_AS(build_scenario(demo_cases(), demo_field(), "", Date::parse("2021-01-14"),
                                   Date::parse("2020-10-12"), Date::parse("2020-11-09"),
                                   Date::parse("2021-01-14")),
                    ConfigError);
    // Field window starting before the case window has no simulated warmup.
    CHECK_THROWS_AS(build_scenario(demo_cases(), demo_field(), "", Date::parse("2020-11-20"),
                                   Date::parse("2021-01-14"), Date::parse("2020-11-09"),
                                   Date::parse("2021-01-14")),
                    ConfigError);
}

TEST_CASE("build_scenario demands field coverage of the whole window") {
    auto field = demo_field();
    field.pop_back(); // window now extends past the data
    CHECK_THROWS_AS(build_scenario(demo_cases(), field, "", Date::parse("2020-10-12"),
                                   Date::parse("2021-01-14"), Date::parse("2020-11-09"),
                                   Date::parse("2021-01-14")),
                    DataError);
}

TEST_CASE("generate_synthetic builds a self-consistent scenario") {
    ArrivalSpec spec;
    spec.daily_counts.assign(50, 3);
    spec.warmup_days = 10;
    const ParamVector truth = canonical_space().defaults();
    Scenario s = generate_synthetic(truth, spec, 42);
    CHECK(s.horizon() == 50);
    CHECK(s.warmup_days == 10);
    CHECK(s.eval_days() == 40);
    CHECK(s.arrivals.total_patients() == 150);
    CHECK(s.has_truth);
    CHECK(s.x_true.values == truth.values);
    for (int day = 0; day < 50; ++day) {
        for (const Patient& p : s.arrivals.per_day[static_cast<size_t>(day)]) {
            CHECK(p.infection_day == day);
            CHECK(p.age >= spec.age_lo);
            CHECK(p.age <= spec.age_hi);
        }
    }
    Scenario again = generate_synthetic(truth, spec, 42);
    CHECK(again.field == s.field);
    Scenario other = generate_synthetic(truth, spec, 43);
    CHECK(other.field != s.field);
}

TEST_CASE("generate_synthetic validates its inputs") {
    ArrivalSpec spec;
    spec.daily_counts.assign(5, 3);
    spec.warmup_days = 10; // warmup beyond the horizon
    CHECK_THROWS_AS(generate_synthetic(canonical_space().defaults(), spec, 1), ConfigError);

    ArrivalSpec ok;
    ok.daily_counts.assign(20, 3);
    ok.warmup_days = 5;
    ParamVector bad = canonical_space().defaults();
    bad.set(14, 2.0);
    CHECK_THROWS_AS(generate_synthetic(bad, ok, 1), ConfigError);
}

TEST_CASE("scenario manifests load both kinds") {
    Scenario files = load_scenario_manifest(std::string(FIXTURES_DIR) + "/scenario.manifest");
    CHECK(files.warmup_days == 28);
    CHECK(files.horizon() == 95);
    CHECK(files.eval_days() == 67);
    CHECK(!files.has_truth);

    Scenario synthetic = load_scenario_manifest(std::string(FIXTURES_DIR) + "/synthetic.manifest");
    CHECK(synthetic.warmup_days == 21);
    CHECK(synthetic.horizon() == 70);
    CHECK(synthetic.has_truth);
}

TEST_CASE("scenario manifest errors are data errors") {
    CHECK_THROWS_AS(load_scenario_manifest("/nonexistent/path.manifest"), DataError);
}
