#include "ssu/tle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace ssu {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
        s.remove_suffix(1);
    }
    return s;
}

// 1-based inclusive column range, as TLE documentation numbers them.
std::string_view cols(std::string_view line, std::size_t first, std::size_t last) {
    return line.substr(first - 1, last - first + 1);
}

double parse_double(std::string_view text, const char* field, std::size_t line_no) {
    std::string_view s = trim(text);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw MalformedTle(line_no, std::string("cannot read field '") + field + "'");
    }
    return v;
}

int parse_int(std::string_view text, const char* field, std::size_t line_no) {
    std::string_view s = trim(text);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw MalformedTle(line_no, std::string("cannot read field '") + field + "'");
    }
    return v;
}

// Reads an implied-decimal field such as " 28098-4" or "-11606-4".
double parse_exponent_field(std::string_view field8, const char* name, std::size_t line_no) {
    const char sign = field8[0];
    if (sign != ' ' && sign != '+' && sign != '-') {
        throw MalformedTle(line_no, std::string("bad sign in field '") + name + "'");
    }
    std::string mantissa = ".";
    for (char c : field8.substr(1, 5)) {
        if (c == ' ') c = '0';
        if (c < '0' || c > '9') throw MalformedTle(line_no, std::string("bad digit in field '") + name + "'");
        mantissa += c;
    }
    const int exponent = parse_int(field8.substr(6, 2), name, line_no);
    double m = parse_double(mantissa, name, line_no);
    if (sign == '-') m = -m;
    return m * std::pow(10.0, exponent);
}

std::string_view strip_line(std::string_view line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' || line.back() == ' ')) {
        line.remove_suffix(1);
    }
    return line;
}

bool looks_like(std::string_view line, char which) {
    line = strip_line(line);
    return line.size() == 69 && line[0] == which && line[1] == ' ';
}

TleDiagnostic diagnostic_from(const TleError& e) {
    TleDiagnostic d{TleDiagnostic::Kind::Malformed, e.line_no(), {}, 0, e.what()};
    if (auto* f = dynamic_cast<const FieldOutOfRange*>(&e)) {
        d.kind = TleDiagnostic::Kind::FieldOutOfRange;
        d.field = f->field();
    } else if (dynamic_cast<const ChecksumMismatch*>(&e)) {
        d.kind = TleDiagnostic::Kind::ChecksumMismatch;
    } else if (auto* ds = dynamic_cast<const DeepSpaceRejected*>(&e)) {
        d.kind = TleDiagnostic::Kind::DeepSpaceRejected;
        d.catalog_id = ds->catalog_id();
    }
    return d;
}

}  // namespace

int tle_checksum(std::string_view line) {
    int sum = 0;
    for (std::size_t i = 0; i < 68 && i < line.size(); ++i) {
        const char c = line[i];
        if (c >= '0' && c <= '9') sum += c - '0';
        else if (c == '-') sum += 1;
    }
    return sum % 10;
}

OrbitalElements parse_tle_record(std::string_view line1, std::string_view line2, std::string_view name,
                                 std::size_t line1_no) {
    const std::size_t line2_no = line1_no + 1;
    line1 = strip_line(line1);
    line2 = strip_line(line2);
    if (line1.size() != 69 || line1[0] != '1') throw MalformedTle(line1_no, "expected a 69-column line 1");
    if (line2.size() != 69 || line2[0] != '2') throw MalformedTle(line2_no, "expected a 69-column line 2");

    auto check = [](std::string_view line, std::size_t no) {
        const char c = line[68];
        if (c < '0' || c > '9' || c - '0' != tle_checksum(line)) throw ChecksumMismatch(no);
    };
    check(line1, line1_no);
    check(line2, line2_no);

    OrbitalElements el;
    el.line1_checksum_ok = true;
    el.line2_checksum_ok = true;

    el.catalog_id = parse_int(cols(line1, 3, 7), "catalog_id", line1_no);
    if (parse_int(cols(line2, 3, 7), "catalog_id", line2_no) != el.catalog_id) {
        throw MalformedTle(line2_no, "catalog number differs from line 1");
    }
    if (el.catalog_id < 0) throw FieldOutOfRange("catalog_id", line1_no);

    const int year = parse_int(cols(line1, 19, 20), "epoch_year", line1_no);
    const std::string_view day_text = trim(cols(line1, 21, 32));
    const double day = parse_double(day_text, "epoch_day", line1_no);
    if (year < 0 || year > 99) throw FieldOutOfRange("epoch_year", line1_no);
    if (day < 1.0 || day >= 367.0) throw FieldOutOfRange("epoch_day", line1_no);
    try {
        el.epoch = tle_epoch(year, day_text);
    } catch (const ConfigError&) {
        throw MalformedTle(line1_no, "cannot read field 'epoch_day'");
    }

    el.bstar = parse_exponent_field(cols(line1, 54, 61), "bstar", line1_no);

    el.inclination_deg = parse_double(cols(line2, 9, 16), "inclination", line2_no);
    el.raan_deg = parse_double(cols(line2, 18, 25), "raan", line2_no);
    std::string ecc = "0.";
    for (char c : cols(line2, 27, 33)) {
        if (c == ' ') c = '0';
        if (c < '0' || c > '9') throw MalformedTle(line2_no, "bad digit in field 'eccentricity'");
        ecc += c;
    }
    el.eccentricity = parse_double(ecc, "eccentricity", line2_no);
    el.arg_perigee_deg = parse_double(cols(line2, 35, 42), "arg_perigee", line2_no);
    el.mean_anomaly_deg = parse_double(cols(line2, 44, 51), "mean_anomaly", line2_no);
    el.mean_motion_rev_per_day = parse_double(cols(line2, 53, 63), "mean_motion", line2_no);

    if (!(el.inclination_deg >= 0.0 && el.inclination_deg <= 180.0)) throw FieldOutOfRange("inclination", line2_no);
    if (!(el.raan_deg >= 0.0 && el.raan_deg < 360.0)) throw FieldOutOfRange("raan", line2_no);
    if (!(el.eccentricity >= 0.0 && el.eccentricity < 1.0)) throw FieldOutOfRange("eccentricity", line2_no);
    if (!(el.arg_perigee_deg >= 0.0 && el.arg_perigee_deg < 360.0)) throw FieldOutOfRange("arg_perigee", line2_no);
    if (!(el.mean_anomaly_deg >= 0.0 && el.mean_anomaly_deg < 360.0)) throw FieldOutOfRange("mean_anomaly", line2_no);
    if (!(el.mean_motion_rev_per_day > 0.0)) throw FieldOutOfRange("mean_motion", line2_no);
    if (1440.0 / el.mean_motion_rev_per_day >= kDeepSpacePeriodMinutes) {
        throw DeepSpaceRejected(el.catalog_id, line2_no);
    }

    std::string_view n = trim(name);
    if (n.size() >= 2 && n[0] == '0' && n[1] == ' ') n = trim(n.substr(2));
    el.name = n.empty() ? "SAT-" + std::to_string(el.catalog_id) : std::string(n);
    return el;
}

TleParseResult parse_tle(std::istream& in) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);

    TleParseResult out;
    auto report = [&](const TleError& e) { out.diagnostics.push_back(diagnostic_from(e)); };
    std::size_t i = 0;
    while (i < lines.size()) {
        if (trim(lines[i]).empty()) {
            ++i;
            continue;
        }
        if (looks_like(lines[i], '2')) {
            report(MalformedTle(i + 1, "line 2 without a preceding line 1"));
            ++i;
            continue;
        }
        std::string_view name;
        std::size_t first = i;
        if (!looks_like(lines[i], '1')) {
            name = lines[i];
            first = i + 1;
        }
        if (first >= lines.size() || !looks_like(lines[first], '1')) {
            report(MalformedTle(first + 1, "expected line 1 of a record"));
            i = std::max(first, i + 1);
            continue;
        }
        if (first + 1 >= lines.size() || !looks_like(lines[first + 1], '2')) {
            report(MalformedTle(first + 2, "expected line 2 of a record"));
            i = first + 1;
            continue;
        }
        try {
            out.records.push_back(parse_tle_record(lines[first], lines[first + 1], name, first + 1));
        } catch (const TleError& e) {
            report(e);
        }
        i = first + 2;
    }
    return out;
}

TleParseResult parse_tle(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_tle(in);
}

TleFileError::TleFileError(const std::filesystem::path& path, std::vector<TleDiagnostic> diagnostics)
    : IngestError(path.string() + ": " + std::to_string(diagnostics.size()) + " bad TLE record(s)" +
                  (diagnostics.empty() ? std::string() : ", first: " + diagnostics.front().message)),
      diagnostics_(std::move(diagnostics)) {}

std::vector<OrbitalElements> load_tle_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open TLE file " + path.string());
    TleParseResult r = parse_tle(in);
    if (!r.diagnostics.empty()) throw TleFileError(path, std::move(r.diagnostics));
    return std::move(r.records);
}

std::string to_string(const TleDiagnostic& d) {
    switch (d.kind) {
        case TleDiagnostic::Kind::ChecksumMismatch:
            return "line " + std::to_string(d.line_no) + ": ChecksumMismatch";
        case TleDiagnostic::Kind::FieldOutOfRange:
            return "line " + std::to_string(d.line_no) + ": FieldOutOfRange(" + d.field + ")";
        case TleDiagnostic::Kind::DeepSpaceRejected:
            return "line " + std::to_string(d.line_no) + ": DeepSpaceRejected(" + std::to_string(d.catalog_id) + ")";
        case TleDiagnostic::Kind::Malformed:
            break;
    }
    return d.message.rfind("line ", 0) == 0 ? d.message : "line " + std::to_string(d.line_no) + ": " + d.message;
}

}  // namespace ssu
