#include "paintph/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "paintph/errors.hpp"

namespace paintph {

std::vector<std::string> CorpusManifest::ids() const {
  std::vector<std::string> out;
  for (const auto& e : entries) out.push_back(e.image_id);
  return out;
}

std::map<std::string, std::string> CorpusManifest::groups() const {
  std::map<std::string, std::string> out;
  for (const auto& e : entries) out[e.image_id] = e.group;
  return out;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

CorpusManifest parse_manifest(std::string_view csv, const std::filesystem::path& base_dir) {
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::set<std::string> seen;
  CorpusManifest manifest;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split_row(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"image_id", "path", "group"})
        throw ConfigError("manifest: header must be 'image_id,path,group'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty())
      throw ConfigError("manifest line " + std::to_string(line_no) +
                        ": expected three nonempty fields");
    if (!seen.insert(fields[0]).second)
      throw ConfigError("manifest line " + std::to_string(line_no) + ": duplicate image_id " +
                        fields[0]);
    std::filesystem::path path = fields[1];
    if (path.is_relative()) path = base_dir / path;
    manifest.entries.push_back({fields[0], path.lexically_normal(), fields[2]});
  }
  if (!header_seen) throw ConfigError("manifest: missing header");
  return manifest;
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  CorpusManifest manifest = parse_manifest(buffer.str(), path.parent_path());
  for (const auto& e : manifest.entries)
    if (!std::filesystem::is_regular_file(e.path))
      throw IntegrityError("manifest: image " + e.image_id + " not found at " + e.path.string());
  return manifest;
}

std::string manifest_csv(const CorpusManifest& manifest) {
  std::ostringstream out;
  out << "image_id,path,group\n";
  for (const auto& e : manifest.entries)
    out << e.image_id << ',' << e.path.generic_string() << ',' << e.group << '\n';
  return out.str();
}

}  // namespace paintph
