#pragma once

#include "hospsim/param_space.hpp"
#include "hospsim/simulation.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hospsim {

/// Proleptic Gregorian calendar date. Parsing accepts ISO-8601 (YYYY-MM-DD)
/// only; arithmetic runs on a days-since-1970-01-01 integer.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    static Date parse(std::string_view text); // throws DataError
    static Date from_days(int days);
    int to_days() const;
    std::string to_string() const;
    Date plus_days(int n) const { return from_days(to_days() + n); }

    friend int operator-(const Date& a, const Date& b) { return a.to_days() - b.to_days(); }
    friend bool operator==(const Date& a, const Date& b) {
        return a.year == b.year && a.month == b.month && a.day == b.day;
    }
    friend auto operator<=>(const Date& a, const Date& b) { return a.to_days() <=> b.to_days(); }
};

enum class Gender { Female, Male };

struct CaseRecord {
    Date date;
    int age = 0;
    Gender gender = Gender::Female;
    std::string region;

    bool operator==(const CaseRecord&) const = default;
};

struct FieldRecord {
    Date date;
    std::int64_t bed = 0;
    std::int64_t icu = 0;
    std::int64_t vent = 0;

    bool operator==(const FieldRecord&) const = default;
};

struct RowIssue {
    int line = 0;
    std::string field;
    std::string reason;
};

enum class ParseMode {
    Strict,  // any bad row aborts with an error listing all bad rows
    Lenient, // bad rows become warnings, good rows are kept
};

struct CaseParseResult {
    std::vector<CaseRecord> records;
    std::vector<RowIssue> issues; // nonempty only in lenient mode
};

/// CSV with bit-exact header "date,age,gender,region". Every row is either
/// parsed or reported; records out + issues out = rows in.
CaseParseResult parse_cases(std::istream& in, ParseMode mode = ParseMode::Strict);
CaseParseResult parse_cases_file(const std::string& path, ParseMode mode = ParseMode::Strict);
void write_cases(const std::vector<CaseRecord>& records, std::ostream& out);

struct FieldParseResult {
    std::vector<FieldRecord> records; // date-sorted, contiguous
    std::vector<std::string> warnings;
};

/// CSV with bit-exact header "date,bed,icu,vent". Output is date-sorted and
/// gap-free; unsorted input is sorted with a warning, a missing date is an
/// error ("gap at <date>"), as are duplicates and negative counts.
FieldParseResult parse_field(std::istream& in);
FieldParseResult parse_field_file(const std::string& path);
void write_field(const std::vector<FieldRecord>& records, std::ostream& out);

/// One fitting problem: who arrives when, what occupancy was observed over
/// the evaluation window, and how the two align on the day axis.
struct Scenario {
    ArrivalSchedule arrivals;       // day 0 == caseStart
    std::vector<FieldRecord> field; // one record per eval-window day
    int warmup_days = 0;            // fieldStart - caseStart
    Date case_start, case_end, field_start, field_end;
    std::string region;

    bool has_truth = false; // synthetic scenarios record their generator
    ParamVector x_true{};
    std::uint64_t seed = 0;

    int horizon() const { return arrivals.horizon_days; }
    int eval_days() const { return static_cast<int>(field.size()); }
    /// Simulation-day index of the k-th field record.
    int field_day_index(int k) const { return warmup_days + k; }
};

/// Filters cases to the region and case window, indexes arrival days from
/// caseStart, and clips the field series to [fieldStart, fieldEnd]. An empty
/// region string matches every record.
Scenario build_scenario(const std::vector<CaseRecord>& cases,
                        const std::vector<FieldRecord>& field, const std::string& region,
                        Date case_start, Date case_end, Date field_start, Date field_end);

struct ArrivalSpec {
    std::vector<int> daily_counts; // one entry per simulated day
    double age_lo = 20.0;
    double age_hi = 90.0;
    double male_fraction = 0.5;
    int warmup_days = 28;
};

/// Builds a scenario whose field series is one simulator run under xTrue, so
/// the ground truth is realizable by construction. Deterministic in seed.
Scenario generate_synthetic(const ParamVector& x_true, const ArrivalSpec& spec,
                            std::uint64_t seed, const ParamSpace& space = canonical_space());

/// Loads a scenario from a key = value manifest. kind = files names case and
/// field CSVs (paths relative to the manifest) plus region and windows;
/// kind = synthetic names the generator knobs. See docs in the fixtures.
Scenario load_scenario_manifest(const std::string& path,
                                const ParamSpace& space = canonical_space());

} // namespace hospsim
