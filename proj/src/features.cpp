#include "hybridex/features.hpp"

#include "hybridex/errors.hpp"
#include "hybridex/io.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace hybridex {

namespace {

constexpr std::string_view kVersionPrefix = "# version:";

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

void append_field(std::string& out, std::string_view field)
{
    if (field.find_first_of(",;\"\r\n") == std::string_view::npos) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
}

/// RFC 4180 records; quoted fields may span lines.
std::vector<std::vector<std::string>> split_records(std::string_view text)
{
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t i = 0;
    auto end_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        records.push_back(std::move(record));
        record.clear();
        field_started = false;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    throw ParseError("csv: characters after closing quote");
                }
                continue;
            }
            field += c;
            ++i;
            continue;
        }
        if (c == '"') {
            if (!field.empty()) {
                throw ParseError("csv: quote inside unquoted field");
            }
            quoted = true;
            field_started = true;
            ++i;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            field_started = true;
            ++i;
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            end_record();
            i += 2;
        } else if (c == '\n') {
            end_record();
            ++i;
        } else {
            field += c;
            field_started = true;
            ++i;
        }
    }
    if (quoted) {
        throw ParseError("csv: unterminated quoted field");
    }
    if (field_started || !record.empty()) {
        end_record();
    }
    return records;
}

}  // namespace

void MonitoredCatalog::validate() const
{
    std::set<ApiSignature> seen;
    for (const auto& s : signatures) {
        if (s.empty()) {
            throw ValidationError("catalog: empty signature");
        }
        if (!seen.insert(s).second) {
            throw ValidationError("catalog: duplicate signature '" + s.text() + "'");
        }
    }
}

bool MonitoredCatalog::contains(const ApiSignature& sig) const
{
    return std::find(signatures.begin(), signatures.end(), sig) != signatures.end();
}

MonitoredCatalog parse_catalog(std::string_view text)
{
    MonitoredCatalog catalog;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        const std::string_view line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        if (line.empty()) {
            continue;
        }
        if (line.starts_with(kVersionPrefix)) {
            catalog.version = std::string(trim(line.substr(kVersionPrefix.size())));
            continue;
        }
        if (line.front() == '#') {
            continue;
        }
        catalog.signatures.emplace_back(std::string(line));
    }
    try {
        catalog.validate();
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
    return catalog;
}

MonitoredCatalog load_catalog_file(const std::filesystem::path& path)
{
    try {
        return parse_catalog(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string serialize_catalog(const MonitoredCatalog& catalog)
{
    std::string out;
    if (!catalog.version.empty()) {
        out += std::string(kVersionPrefix) + " " + catalog.version + "\n";
    }
    for (const auto& s : catalog.signatures) {
        out += s.text();
        out += '\n';
    }
    return out;
}

MonitoredCatalog default_catalog(const std::vector<AppModel>& corpus)
{
    SignatureSet all;
    for (const auto& app : corpus) {
        all.merge(app.all_signatures());
    }
    MonitoredCatalog catalog;
    catalog.signatures.assign(all.begin(), all.end());
    catalog.version = "corpus-union";
    return catalog;
}

SignatureSet filter_emissions(const RunLog& log, const MonitoredCatalog& catalog)
{
    const std::set<ApiSignature> monitored(catalog.signatures.begin(), catalog.signatures.end());
    SignatureSet out;
    for (const auto& s : log.distinct_signatures()) {
        if (monitored.contains(s)) {
            out.insert(s);
        }
    }
    return out;
}

void FeatureMatrix::validate() const
{
    if (cells.size() != app_ids.size()) {
        throw ValidationError("feature matrix: row count does not match app ids");
    }
    std::set<std::string> ids;
    for (std::size_t r = 0; r < cells.size(); ++r) {
        if (!ids.insert(app_ids[r]).second) {
            throw ValidationError("duplicate-app-id: '" + app_ids[r] + "'");
        }
        if (cells[r].size() != columns.size()) {
            throw ValidationError("feature matrix: row '" + app_ids[r] + "' has the wrong width");
        }
        for (auto v : cells[r]) {
            if (v > 1) {
                throw ValidationError("feature matrix: cell outside {0,1}");
            }
        }
    }
}

FeatureMatrix build_matrix(const std::vector<RunLog>& logs, const MonitoredCatalog& catalog,
                           MatrixDiagnostics* diagnostics)
{
    catalog.validate();
    std::optional<ScenarioKind> scenario;
    std::vector<const RunLog*> sorted;
    sorted.reserve(logs.size());
    for (const auto& log : logs) {
        if (scenario && *scenario != log.scenario) {
            throw ValidationError("build_matrix: run logs span more than one scenario");
        }
        scenario = log.scenario;
        sorted.push_back(&log);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const RunLog* a, const RunLog* b) { return a->app_id < b->app_id; });

    std::map<ApiSignature, std::size_t> column_of;
    for (std::size_t c = 0; c < catalog.signatures.size(); ++c) {
        column_of.emplace(catalog.signatures[c], c);
    }

    FeatureMatrix m;
    m.columns = catalog.signatures;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const RunLog& log = *sorted[i];
        if (i > 0 && sorted[i - 1]->app_id == log.app_id) {
            throw ValidationError("duplicate-app-id: '" + log.app_id + "'");
        }
        std::vector<std::uint8_t> row(m.columns.size(), 0);
        for (const auto& s : log.distinct_signatures()) {
            if (auto it = column_of.find(s); it != column_of.end()) {
                row[it->second] = 1;
            } else if (diagnostics != nullptr) {
                ++diagnostics->dropped[s];
            }
        }
        m.app_ids.push_back(log.app_id);
        m.cells.push_back(std::move(row));
    }
    return m;
}

std::string to_csv(const FeatureMatrix& matrix)
{
    matrix.validate();
    std::string out = "app_id";
    for (const auto& s : matrix.columns) {
        out += ',';
        append_field(out, s.text());
    }
    out += '\n';
    for (std::size_t r = 0; r < matrix.app_ids.size(); ++r) {
        append_field(out, matrix.app_ids[r]);
        for (auto v : matrix.cells[r]) {
            out += ',';
            out += v ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

void write_csv(const FeatureMatrix& matrix, const std::filesystem::path& path)
{
    write_text_file(path, to_csv(matrix));
}

FeatureMatrix parse_csv(std::string_view text)
{
    const auto records = split_records(text);
    if (records.empty()) {
        throw ParseError("csv: missing header");
    }
    const auto& header = records.front();
    if (header.front() != "app_id") {
        throw ParseError("csv: header must start with app_id");
    }
    FeatureMatrix m;
    for (std::size_t c = 1; c < header.size(); ++c) {
        m.columns.emplace_back(header[c]);
    }
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size()) {
            throw ParseError("csv: row " + std::to_string(r) + " has " + std::to_string(rec.size())
                             + " fields, expected " + std::to_string(header.size()));
        }
        std::vector<std::uint8_t> row;
        row.reserve(m.columns.size());
        for (std::size_t c = 1; c < rec.size(); ++c) {
            if (rec[c] != "0" && rec[c] != "1") {
                throw ParseError("csv: row " + std::to_string(r) + " has a non-binary cell '" + rec[c] + "'");
            }
            row.push_back(rec[c] == "1" ? 1 : 0);
        }
        m.app_ids.push_back(rec.front());
        m.cells.push_back(std::move(row));
    }
    try {
        m.validate();
        MonitoredCatalog{m.columns, {}}.validate();
    } catch (const ValidationError& e) {
        throw ParseError(std::string("csv: ") + e.what());
    }
    return m;
}

FeatureMatrix read_csv(const std::filesystem::path& path)
{
    try {
        return parse_csv(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace hybridex
