#include <zlib.h>

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ddm/dataset.hpp"
#include "ddm/errors.hpp"

namespace ddm {

namespace {

constexpr int kFieldCount = 8 + 16 + 1;

bool isGzip(const std::filesystem::path& path) { return path.extension() == ".gz"; }

void appendNumber(std::string& out, double v)
{
  std::array<char, 32> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  out.append(buf.data(), static_cast<std::size_t>(n));
}

double parseNumber(std::string_view token, const std::string& source, std::size_t line)
{
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(source, line, "invalid number '" + std::string(token) + "'");
  }
  return v;
}

std::vector<std::string_view> splitFields(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string readGzip(const std::filesystem::path& path)
{
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (f == nullptr) throw ParameterError("cannot open dataset file " + path.string());
  std::string data;
  std::array<char, 1 << 16> buf{};
  int n = 0;
  while ((n = gzread(f, buf.data(), static_cast<unsigned>(buf.size()))) > 0) data.append(buf.data(), n);
  const bool failed = n < 0;
  gzclose(f);
  if (failed) throw ParameterError("corrupt gzip stream in " + path.string());
  return data;
}

}  // namespace

void writeDataset(const LabeledDataSet& ds, std::ostream& out)
{
  std::string text;
  text.reserve(64 + ds.size() * 25 * 24);
  text.append(kDatasetMagic);
  text.append(" " + std::to_string(kDatasetSchemaVersion) + " metric_modulus=");
  appendNumber(text, ds.metricModulus());
  text.append("\n# eps_xx eps_yy eps_zz gam_xy sig_xx sig_yy sig_zz sig_xy C11..C44 label\n");
  for (const DataPoint& p : ds.points()) {
    for (double v : p.strain.toStrainVoigt()) {
      appendNumber(text, v);
      text.push_back(' ');
    }
    for (double v : p.stress.toStressVoigt()) {
      appendNumber(text, v);
      text.push_back(' ');
    }
    const Mat4 c = p.tangent.toVoigt();
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        appendNumber(text, c(i, j));
        text.push_back(' ');
      }
    }
    text.append(subsetName(p.label));
    text.push_back('\n');
  }
  out << text;
}

LabeledDataSet parseDataset(std::istream& in, const std::string& sourceName)
{
  std::string line;
  std::size_t lineNo = 1;
  if (!std::getline(in, line)) throw ParseError(sourceName, lineNo, "missing dataset header");
  const auto header = splitFields(line);
  if (header.size() != 3 || header[0] != kDatasetMagic) {
    throw ParseError(sourceName, lineNo, "expected header '" + std::string(kDatasetMagic) + " <version> metric_modulus=<E>'");
  }
  if (header[1] != std::to_string(kDatasetSchemaVersion)) {
    throw ParseError(sourceName, lineNo, "unsupported schema version " + std::string(header[1]));
  }
  constexpr std::string_view key = "metric_modulus=";
  if (!header[2].starts_with(key)) throw ParseError(sourceName, lineNo, "missing metric_modulus");
  const double modulus = parseNumber(header[2].substr(key.size()), sourceName, lineNo);
  if (!(modulus > 0.0)) throw ParseError(sourceName, lineNo, "metric_modulus must be positive");

  std::vector<DataPoint> points;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto fields = splitFields(line);
    if (fields.empty() || fields[0].starts_with("#")) continue;
    if (fields.size() != kFieldCount) {
      throw ParseError(sourceName, lineNo,
                       "expected " + std::to_string(kFieldCount) + " fields, got " + std::to_string(fields.size()));
    }
    std::array<double, 4> strain{};
    std::array<double, 4> stress{};
    Mat4 c;
    for (int i = 0; i < 4; ++i) strain[i] = parseNumber(fields[i], sourceName, lineNo);
    for (int i = 0; i < 4; ++i) stress[i] = parseNumber(fields[4 + i], sourceName, lineNo);
    for (int k = 0; k < 16; ++k) c(k / 4, k % 4) = parseNumber(fields[8 + k], sourceName, lineNo);
    Subset label{};
    try {
      label = parseSubset(fields[24]);
    } catch (const ParameterError& e) {
      throw ParseError(sourceName, lineNo, e.what());
    }
    points.push_back(
        {SymTensor::fromStrainVoigt(strain), SymTensor::fromStressVoigt(stress), TangentMatrix::fromVoigt(c), label});
  }
  return LabeledDataSet(std::move(points), modulus);
}

void saveDataset(const LabeledDataSet& ds, const std::filesystem::path& path)
{
  if (isGzip(path)) {
    std::ostringstream buf;
    writeDataset(ds, buf);
    const std::string data = buf.str();
    gzFile f = gzopen(path.string().c_str(), "wb");
    if (f == nullptr) throw ParameterError("cannot write dataset file " + path.string());
    const int written = gzwrite(f, data.data(), static_cast<unsigned>(data.size()));
    gzclose(f);
    if (written != static_cast<int>(data.size())) throw ParameterError("short gzip write to " + path.string());
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write dataset file " + path.string());
  writeDataset(ds, out);
}

LabeledDataSet loadDataset(const std::filesystem::path& path)
{
  if (isGzip(path)) {
    std::istringstream in(readGzip(path));
    return parseDataset(in, path.string());
  }
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open dataset file " + path.string());
  return parseDataset(in, path.string());
}

}  // namespace ddm
