#include "hospsim/data.hpp"

#include "hospsim/errors.hpp"
#include "hospsim/random.hpp"
#include "hospsim/text.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace hospsim {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

// Howard Hinnant's civil-calendar algorithms.
int days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

Date civil_from_days(int z) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{y + (m <= 2), static_cast<int>(m), static_cast<int>(d)};
}

int days_in_month(int year, int month) {
    static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[month - 1];
}

std::string issue_text(const std::vector<RowIssue>& issues) {
    std::ostringstream out;
    out << issues.size() << " bad row" << (issues.size() == 1 ? "" : "s") << ":";
    for (const RowIssue& i : issues)
        out << "\n  line " << i.line << ", field " << i.field << ": " << i.reason;
    return out.str();
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return in;
}

std::int64_t parse_count(const std::string& text, int lineno, const char* field) {
    std::int64_t v = 0;
    try {
        size_t pos = 0;
        v = std::stoll(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw DataError("field data line " + std::to_string(lineno) + ": unparsable " +
                        field + " count '" + text + "'");
    }
    if (v < 0)
        throw DataError("field data line " + std::to_string(lineno) + ": negative " +
                        field + " count");
    return v;
}

} // namespace

Date Date::parse(std::string_view text) {
    const std::string t = trim(text);
    if (t.size() != 10 || t[4] != '-' || t[7] != '-' || !all_digits(t.substr(0, 4)) ||
        !all_digits(t.substr(5, 2)) || !all_digits(t.substr(8, 2)))
        throw DataError("unparsable date '" + t + "' (expected YYYY-MM-DD)");
    Date d;
    d.year = std::stoi(t.substr(0, 4));
    d.month = std::stoi(t.substr(5, 2));
    d.day = std::stoi(t.substr(8, 2));
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
        throw DataError("unparsable date '" + t + "' (no such calendar day)");
    return d;
}

Date Date::from_days(int days) { return civil_from_days(days); }

int Date::to_days() const { return days_from_civil(year, month, day); }

std::string Date::to_string() const {
    char buf[11];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

CaseParseResult parse_cases(std::istream& in, ParseMode mode) {
    CaseParseResult result;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "date,age,gender,region")
                throw DataError("case data: expected header 'date,age,gender,region', got '" +
                                t + "'");
            header_seen = true;
            continue;
        }
        const std::vector<std::string> parts = split(t, ',');
        if (parts.size() != 4) {
            result.issues.push_back({lineno, "row", "expected 4 fields, got " +
                                                        std::to_string(parts.size())});
            continue;
        }
        CaseRecord rec;
        try {
            rec.date = Date::parse(parts[0]);
        } catch (const DataError& e) {
            result.issues.push_back({lineno, "date", e.what()});
            continue;
        }
        const std::string age_text = trim(parts[1]);
        try {
            size_t pos = 0;
            rec.age = std::stoi(age_text, &pos);
            if (pos != age_text.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            result.issues.push_back({lineno, "age", "unparsable age '" + age_text + "'"});
            continue;
        }
        if (rec.age < 0 || rec.age > 120) {
            result.issues.push_back(
                {lineno, "age", "age " + std::to_string(rec.age) + " out of range [0, 120]"});
            continue;
        }
        const std::string gender = to_lower(trim(parts[2]));
        if (gender == "male") {
            rec.gender = Gender::Male;
        } else if (gender == "female") {
            rec.gender = Gender::Female;
        } else {
            result.issues.push_back({lineno, "gender", "unknown gender token '" + gender + "'"});
            continue;
        }
        rec.region = trim(parts[3]);
        result.records.push_back(std::move(rec));
    }
    if (!header_seen) throw DataError("case data: missing header");
    if (mode == ParseMode::Strict && !result.issues.empty())
        throw DataError("case data: " + issue_text(result.issues));
    return result;
}

CaseParseResult parse_cases_file(const std::string& path, ParseMode mode) {
    std::ifstream in = open_input(path);
    try {
        return parse_cases(in, mode);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_cases(const std::vector<CaseRecord>& records, std::ostream& out) {
    out << "date,age,gender,region\n";
    for (const CaseRecord& r : records)
        out << r.date.to_string() << ',' << r.age << ','
            << (r.gender == Gender::Male ? "male" : "female") << ',' << r.region << '\n';
}

FieldParseResult parse_field(std::istream& in) {
    FieldParseResult result;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    bool sorted = true;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "date,bed,icu,vent")
                throw DataError("field data: expected header 'date,bed,icu,vent', got '" + t +
                                "'");
            header_seen = true;
            continue;
        }
        const std::vector<std::string> parts = split(t, ',');
        if (parts.size() != 4)
            throw DataError("field data line " + std::to_string(lineno) + ": expected 4 fields");
        FieldRecord rec;
        try {
            rec.date = Date::parse(parts[0]);
        } catch (const DataError& e) {
            throw DataError("field data line " + std::to_string(lineno) + ": " + e.what());
        }
        rec.bed = parse_count(trim(parts[1]), lineno, "bed");
        rec.icu = parse_count(trim(parts[2]), lineno, "icu");
        rec.vent = parse_count(trim(parts[3]), lineno, "vent");
        if (!result.records.empty() && rec.date < result.records.back().date) sorted = false;
        result.records.push_back(rec);
    }
    if (!header_seen) throw DataError("field data: missing header");
    if (!sorted) {
        std::stable_sort(result.records.begin(), result.records.end(),
                         [](const FieldRecord& a, const FieldRecord& b) { return a.date < b.date; });
        result.warnings.push_back("input was not date-sorted; records were sorted");
    }
    for (size_t i = 1; i < result.records.size(); ++i) {
        const int gap = result.records[i].date - result.records[i - 1].date;
        if (gap == 0)
            throw DataError("field data: duplicate date " + result.records[i].date.to_string());
        if (gap > 1)
            throw DataError("field data: gap at " +
                            result.records[i - 1].date.plus_days(1).to_string());
    }
    return result;
}

FieldParseResult parse_field_file(const std::string& path) {
    std::ifstream in = open_input(path);
    try {
        return parse_field(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_field(const std::vector<FieldRecord>& records, std::ostream& out) {
    out << "date,bed,icu,vent\n";
    for (const FieldRecord& r : records)
        out << r.date.to_string() << ',' << r.bed << ',' << r.icu << ',' << r.vent << '\n';
}

Scenario build_scenario(const std::vector<CaseRecord>& cases,
                        const std::vector<FieldRecord>& field, const std::string& region,
                        Date case_start, Date case_end, Date field_start, Date field_end) {
    if (case_end < case_start)
        throw ConfigError("inverted case window: " + case_start.to_string() + " > " +
                          case_end.to_string());
    if (field_end < field_start)
        throw ConfigError("inverted field window: " + field_start.to_string() + " > " +
                          field_end.to_string());
    if (field_start < case_start)
        throw ConfigError("field window starts before case window; no warm-up cases available");

    Scenario s;
    s.region = region;
    s.case_start = case_start;
    s.case_end = case_end;
    s.field_start = field_start;
    s.field_end = field_end;
    s.warmup_days = field_start - case_start;

    const int horizon = std::max(case_end, field_end) - case_start + 1;
    s.arrivals = ArrivalSchedule::empty(horizon);
    std::int64_t next_id = 0;
    for (const CaseRecord& c : cases) {
        if (!region.empty() && c.region != region) continue;
        if (c.date < case_start || case_end < c.date) continue;
        const int day = c.date - case_start;
        Patient p;
        p.id = next_id++;
        p.infection_day = day;
        p.age = static_cast<double>(c.age);
        p.male = c.gender == Gender::Male;
        s.arrivals.per_day[static_cast<size_t>(day)].push_back(p);
    }
    if (next_id == 0) throw DataError("empty region selection: no cases match '" + region + "'");

    std::map<int, const FieldRecord*> by_day;
    for (const FieldRecord& r : field) by_day[r.date.to_days()] = &r;
    for (int day = field_start.to_days(); day <= field_end.to_days(); ++day) {
        auto it = by_day.find(day);
        if (it == by_day.end())
            throw DataError("field data missing " + Date::from_days(day).to_string() +
                            " inside the evaluation window");
        s.field.push_back(*it->second);
    }
    return s;
}

Scenario generate_synthetic(const ParamVector& x_true, const ArrivalSpec& spec,
                            std::uint64_t seed, const ParamSpace& space) {
    const int horizon = static_cast<int>(spec.daily_counts.size());
    if (horizon == 0) throw ConfigError("synthetic scenario: daily_counts is empty");
    if (spec.warmup_days < 0 || spec.warmup_days >= horizon)
        throw ConfigError("synthetic scenario: warm-up must lie inside the horizon");
    if (spec.age_hi < spec.age_lo)
        throw ConfigError("synthetic scenario: age_hi below age_lo");
    if (spec.male_fraction < 0.0 || spec.male_fraction > 1.0)
        throw ConfigError("synthetic scenario: male_fraction outside [0, 1]");
    const ValidationResult check = validate_vector(space, x_true);
    if (!check.ok())
        throw ConfigError("synthetic scenario: invalid truth vector: " + check.describe());

    Scenario s;
    s.case_start = Date{2020, 1, 1};
    s.case_end = s.case_start.plus_days(horizon - 1);
    s.field_start = s.case_start.plus_days(spec.warmup_days);
    s.field_end = s.case_end;
    s.warmup_days = spec.warmup_days;
    s.region = "synthetic";
    s.has_truth = true;
    s.x_true = x_true;
    s.seed = seed;

    s.arrivals = ArrivalSchedule::empty(horizon);
    RngStream rng = derive_stream(SeedSpec{seed, {"synthetic-arrivals", 0, 0}});
    std::int64_t next_id = 0;
    for (int day = 0; day < horizon; ++day) {
        const int count = spec.daily_counts[static_cast<size_t>(day)];
        if (count < 0) throw ConfigError("synthetic scenario: negative daily count");
        for (int k = 0; k < count; ++k) {
            Patient p;
            p.id = next_id++;
            p.infection_day = day;
            p.age = rng.uniform(spec.age_lo, spec.age_hi);
            p.male = rng.uniform01() < spec.male_fraction;
            s.arrivals.per_day[static_cast<size_t>(day)].push_back(p);
        }
    }

    const OccupancyTrace truth =
        simulate(s.arrivals, x_true, space.graph(), SeedSpec{seed, {"synthetic-truth", 0, 0}});
    for (int k = spec.warmup_days; k < horizon; ++k) {
        FieldRecord r;
        r.date = s.case_start.plus_days(k);
        r.bed = truth.at(k, Resource::Bed);
        r.icu = truth.at(k, Resource::Icu);
        r.vent = truth.at(k, Resource::Vent);
        s.field.push_back(r);
    }
    return s;
}

Scenario load_scenario_manifest(const std::string& path, const ParamSpace& space) {
    std::ifstream in = open_input(path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError(path + " line " + std::to_string(lineno) +
                            ": expected key = value");
        const std::string key = to_lower(trim(t.substr(0, eq)));
        const std::string value = trim(t.substr(eq + 1));
        if (kv.count(key))
            throw DataError(path + ": duplicate key '" + key + "'");
        kv[key] = value;
    }

    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw DataError(path + ": missing key '" + key + "'");
        return it->second;
    };
    auto resolve = [&](const std::string& rel) {
        std::filesystem::path p(rel);
        if (p.is_absolute()) return p.string();
        return (std::filesystem::path(path).parent_path() / p).string();
    };

    const std::string kind = to_lower(need("kind"));
    if (kind == "files") {
        const CaseParseResult cases = parse_cases_file(resolve(need("cases")));
        const FieldParseResult field = parse_field_file(resolve(need("field")));
        const std::string region = kv.count("region") ? kv["region"] : "";
        return build_scenario(cases.records, field.records, region,
                              Date::parse(need("case_start")), Date::parse(need("case_end")),
                              Date::parse(need("field_start")), Date::parse(need("field_end")));
    }
    if (kind == "synthetic") {
        ArrivalSpec spec;
        std::uint64_t seed = 0;
        ParamVector x_true = space.defaults();
        try {
            const int days = std::stoi(need("days"));
            const int per_day = std::stoi(need("cases_per_day"));
            if (days <= 0 || per_day < 0)
                throw DataError(path + ": days must be positive and cases_per_day nonnegative");
            spec.daily_counts.assign(static_cast<size_t>(days), per_day);
            if (kv.count("warmup")) spec.warmup_days = std::stoi(kv["warmup"]);
            if (kv.count("age_lo")) spec.age_lo = std::stod(kv["age_lo"]);
            if (kv.count("age_hi")) spec.age_hi = std::stod(kv["age_hi"]);
            if (kv.count("male_fraction")) spec.male_fraction = std::stod(kv["male_fraction"]);
            seed = std::stoull(need("seed"));
        } catch (const DataError&) {
            throw;
        } catch (const std::exception&) {
            throw DataError(path + ": unparsable numeric value");
        }
        if (kv.count("truth_file")) {
            std::ifstream tin = open_input(resolve(kv["truth_file"]));
            x_true = load_vector_csv(tin);
        }
        try {
            return generate_synthetic(x_true, spec, seed, space);
        } catch (const ConfigError& e) {
            throw DataError(path + ": " + e.what());
        }
    }
    throw DataError(path + ": unknown kind '" + kind + "' (expected files or synthetic)");
}

} // namespace hospsim
