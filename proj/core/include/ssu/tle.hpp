#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ssu/error.hpp"
#include "ssu/time.hpp"

namespace ssu {

struct OrbitalElements {
    int catalog_id = 0;
    std::string name;
    UtcTime epoch{};
    double inclination_deg = 0.0;
    double raan_deg = 0.0;
    double eccentricity = 0.0;
    double arg_perigee_deg = 0.0;
    double mean_anomaly_deg = 0.0;
    double mean_motion_rev_per_day = 0.0;
    double bstar = 0.0;  // inverse Earth radii
    bool line1_checksum_ok = false;
    bool line2_checksum_ok = false;
};

/// Records with a period at or above this many minutes use the deep-space
/// model, which is not implemented.
inline constexpr double kDeepSpacePeriodMinutes = 225.0;

class TleError : public IngestError {
public:
    TleError(std::size_t line_no, const std::string& what)
        : IngestError("line " + std::to_string(line_no) + ": " + what), line_no_(line_no) {}
    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::size_t line_no_;
};

class ChecksumMismatch : public TleError {
public:
    explicit ChecksumMismatch(std::size_t line_no) : TleError(line_no, "checksum mismatch") {}
};

class FieldOutOfRange : public TleError {
public:
    FieldOutOfRange(std::string field, std::size_t line_no)
        : TleError(line_no, "field '" + field + "' out of range"), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class DeepSpaceRejected : public TleError {
public:
    DeepSpaceRejected(int catalog_id, std::size_t line_no)
        : TleError(line_no, "catalog " + std::to_string(catalog_id) +
                                " has a period of 225 min or more (deep space)"),
          catalog_id_(catalog_id) {}
    int catalog_id() const noexcept { return catalog_id_; }

private:
    int catalog_id_;
};

class MalformedTle : public TleError {
public:
    using TleError::TleError;
};

struct TleDiagnostic {
    enum class Kind { ChecksumMismatch, FieldOutOfRange, DeepSpaceRejected, Malformed };
    Kind kind;
    std::size_t line_no;  // 1-based line in the source
    std::string field;    // set for FieldOutOfRange
    int catalog_id = 0;   // set for DeepSpaceRejected
    std::string message;
};

struct TleParseResult {
    std::vector<OrbitalElements> records;
    std::vector<TleDiagnostic> diagnostics;
};

/// Modulo-10 checksum over the first 68 columns: digits count their value,
/// '-' counts 1, everything else 0.
int tle_checksum(std::string_view line);

/// Parses one record. Line numbers are used only for error reporting.
/// Throws ChecksumMismatch, FieldOutOfRange, DeepSpaceRejected or MalformedTle.
OrbitalElements parse_tle_record(std::string_view line1, std::string_view line2,
                                 std::string_view name = {}, std::size_t line1_no = 1);

/// Reads 2-line and 3-line records. Bad records are reported in the
/// diagnostics and parsing resumes at the next line.
TleParseResult parse_tle(std::istream& in);
TleParseResult parse_tle(std::string_view text);

/// Loads a file and throws TleFileError if it contains any bad record.
std::vector<OrbitalElements> load_tle_file(const std::filesystem::path& path);

class TleFileError : public IngestError {
public:
    TleFileError(const std::filesystem::path& path, std::vector<TleDiagnostic> diagnostics);
    const std::vector<TleDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<TleDiagnostic> diagnostics_;
};

std::string to_string(const TleDiagnostic& d);

}  // namespace ssu
