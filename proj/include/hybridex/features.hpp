#pragma once

#include "hybridex/app_model.hpp"
#include "hybridex/run_log.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hybridex {

/// The instrumentation list. Order is the CSV column order.
struct MonitoredCatalog {
    std::vector<ApiSignature> signatures;
    std::string version;

    /// No duplicates, no empty signatures.
    void validate() const;
    [[nodiscard]] bool contains(const ApiSignature& sig) const;

    friend bool operator==(const MonitoredCatalog&, const MonitoredCatalog&) = default;
};

/// One signature per line. Blank lines and lines starting with '#' are
/// skipped, except "# version: X", which sets the version tag.
MonitoredCatalog parse_catalog(std::string_view text);
MonitoredCatalog load_catalog_file(const std::filesystem::path& path);
std::string serialize_catalog(const MonitoredCatalog& catalog);

/// Sorted union of every signature the corpus can emit.
MonitoredCatalog default_catalog(const std::vector<AppModel>& corpus);

/// Distinct emitted signatures that the catalog monitors.
SignatureSet filter_emissions(const RunLog& log, const MonitoredCatalog& catalog);

struct FeatureMatrix {
    std::vector<ApiSignature> columns;
    std::vector<std::string> app_ids;
    /// Row-major, one row per app id, each cell 0 or 1.
    std::vector<std::vector<std::uint8_t>> cells;

    /// Shape, cell values and unique app ids.
    void validate() const;

    friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

/// Emitted-but-unmonitored signatures, with the number of apps emitting each.
struct MatrixDiagnostics {
    std::map<ApiSignature, std::size_t> dropped;
};

/// Rows sorted by app id. Throws ValidationError on a duplicate app id or
/// when the logs span more than one scenario.
FeatureMatrix build_matrix(const std::vector<RunLog>& logs, const MonitoredCatalog& catalog,
                           MatrixDiagnostics* diagnostics = nullptr);

/// Header "app_id,<signatures...>", one row per app, LF line ends. Fields
/// containing a comma, semicolon, quote or line break are quoted.
std::string to_csv(const FeatureMatrix& matrix);
void write_csv(const FeatureMatrix& matrix, const std::filesystem::path& path);

/// Accepts LF or CRLF. Throws ParseError.
FeatureMatrix parse_csv(std::string_view text);
FeatureMatrix read_csv(const std::filesystem::path& path);

}  // namespace hybridex
