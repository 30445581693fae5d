#include "shapeeval/dataset.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "text_util.hpp"

namespace shapeeval {

using internal::ParseInt;
using internal::SplitLines;
using internal::StripComment;
using internal::Tokenize;

std::string_view FormatName(ClassificationFormat format) {
  switch (format) {
    case ClassificationFormat::kAuto:
      return "auto";
    case ClassificationFormat::kSimple:
      return "simple";
    case ClassificationFormat::kCla:
      return "cla";
  }
  return "auto";
}

ClassificationFormat ParseClassificationFormat(std::string_view name) {
  if (name == "auto") return ClassificationFormat::kAuto;
  if (name == "simple") return ClassificationFormat::kSimple;
  if (name == "cla") return ClassificationFormat::kCla;
  throw InputError(fmt::format("unknown classification format '{}'", name));
}

bool IsValidIdentifier(std::string_view token) {
  if (token.empty()) return false;
  return std::none_of(token.begin(), token.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f' || c == '#';
  });
}

void Classification::AddClass(const ClassLabel& label) {
  if (!IsValidIdentifier(label)) {
    throw InputError(fmt::format("invalid class label '{}'", label));
  }
  if (class_index_.count(label) == 0) {
    class_index_.emplace(label, classes_.size());
    classes_.push_back({label, {}});
  }
}

void Classification::Add(const ObjectId& object, const ClassLabel& label) {
  if (!IsValidIdentifier(object)) {
    throw InputError(fmt::format("invalid object id '{}'", object));
  }
  AddClass(label);
  const std::size_t index = class_index_.at(label);
  auto [it, inserted] = class_of_.emplace(object, index);
  if (!inserted) {
    throw InputError(fmt::format("duplicate object '{}' (in classes '{}' and '{}')",
                                 object, classes_[it->second].label, label));
  }
  classes_[index].members.push_back(object);
}

const ObjectClass* Classification::ClassOf(std::string_view object) const {
  auto it = class_of_.find(std::string(object));
  return it == class_of_.end() ? nullptr : &classes_[it->second];
}

const ObjectClass* Classification::FindClass(std::string_view label) const {
  auto it = class_index_.find(std::string(label));
  return it == class_index_.end() ? nullptr : &classes_[it->second];
}

std::vector<ObjectId> Classification::Objects() const {
  std::vector<ObjectId> out;
  out.reserve(object_count());
  for (const auto& cls : classes_) {
    out.insert(out.end(), cls.members.begin(), cls.members.end());
  }
  return out;
}

std::map<ObjectId, ClassLabel> Classification::Entries() const {
  std::map<ObjectId, ClassLabel> out;
  for (const auto& cls : classes_) {
    for (const auto& m : cls.members) out.emplace(m, cls.label);
  }
  return out;
}

namespace {

bool LooksLikeCla(std::string_view text) {
  for (std::string_view line : SplitLines(text)) {
    line = StripComment(line);
    if (line.empty()) continue;
    auto tokens = Tokenize(line);
    return tokens.size() == 2 && tokens[0] == "PSB";
  }
  return false;
}

Classification ParseSimple(std::string_view text, const std::string& source) {
  Classification c;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = StripComment(lines[i]);
    if (line.empty()) continue;
    const auto tokens = Tokenize(line);
    if (tokens.size() != 2) {
      throw ParseError(source, i + 1,
                       fmt::format("expected 'object_id class_label', got {} "
                                   "field(s)",
                                   tokens.size()));
    }
    try {
      c.Add(std::string(tokens[0]), std::string(tokens[1]));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(source, i + 1, e.what());
    }
  }
  if (c.class_count() == 0) throw ParseError(source, 0, "empty classification");
  return c;
}

struct ClaBlock {
  std::string name;
  std::string parent;
  std::vector<std::string> members;
};

Classification ParseCla(std::string_view text, const std::string& source) {
  const auto lines = SplitLines(text);
  std::size_t i = 0;
  auto next_line = [&]() -> std::optional<std::vector<std::string_view>> {
    while (i < lines.size()) {
      const std::string_view line = StripComment(lines[i++]);
      if (!line.empty()) return Tokenize(line);
    }
    return std::nullopt;
  };

  auto header = next_line();
  if (!header) throw ParseError(source, 0, "empty classification");
  if (header->size() != 2 || (*header)[0] != "PSB") {
    throw ParseError(source, i, "expected header 'PSB <version>'");
  }
  auto counts = next_line();
  if (!counts) throw ParseError(source, 0, "missing '<num_classes> <num_models>'");
  const std::size_t counts_line = i;
  if (counts->size() != 2 || !ParseInt((*counts)[0]) ||
      !ParseInt((*counts)[1]) || *ParseInt((*counts)[0]) < 0 ||
      *ParseInt((*counts)[1]) < 0) {
    throw ParseError(source, counts_line,
                     "expected '<num_classes> <num_models>'");
  }
  const auto declared_classes = static_cast<std::size_t>(*ParseInt((*counts)[0]));
  const auto declared_models = static_cast<std::size_t>(*ParseInt((*counts)[1]));

  std::vector<ClaBlock> blocks;
  while (auto tokens = next_line()) {
    const std::size_t line_no = i;
    if (tokens->size() != 3 || !ParseInt((*tokens)[2])) {
      if (tokens->size() == 1 && !blocks.empty()) {
        throw ParseError(source, line_no,
                         fmt::format("class '{}' declares {} member(s) but more "
                                     "follow",
                                     blocks.back().name,
                                     blocks.back().members.size()));
      }
      throw ParseError(source, line_no,
                       "expected '<class_name> <parent_name> <count>'");
    }
    const long long count = *ParseInt((*tokens)[2]);
    if (count < 0) throw ParseError(source, line_no, "negative member count");
    ClaBlock block{std::string((*tokens)[0]), std::string((*tokens)[1]), {}};
    for (long long k = 0; k < count; ++k) {
      auto member = next_line();
      if (!member) {
        throw ParseError(source, i,
                         fmt::format("class '{}' declares {} member(s) but only "
                                     "{} follow",
                                     block.name, count, k));
      }
      if (member->size() != 1) {
        throw ParseError(source, i,
                         fmt::format("class '{}' declares {} member(s) but only "
                                     "{} follow",
                                     block.name, count, k));
      }
      block.members.emplace_back((*member)[0]);
    }
    blocks.push_back(std::move(block));
  }
  if (blocks.size() != declared_classes) {
    throw ParseError(source, counts_line,
                     fmt::format("header declares {} class(es), found {}",
                                 declared_classes, blocks.size()));
  }

  std::set<std::string> parents;
  for (const auto& b : blocks) parents.insert(b.parent);

  Classification c;
  for (const auto& b : blocks) {
    if (b.members.empty() && parents.count(b.name) > 0) continue;  // interior
    try {
      c.AddClass(b.name);
      for (const auto& m : b.members) c.Add(m, b.name);
    } catch (const InputError& e) {
      throw ParseError(source, 0, e.what());
    }
  }
  c.set_declared_object_count(declared_models);
  return c;
}

}  // namespace

Classification ParseClassification(std::string_view text,
                                   ClassificationFormat format,
                                   const std::string& source_name) {
  if (format == ClassificationFormat::kAuto) {
    format = LooksLikeCla(text) ? ClassificationFormat::kCla
                                : ClassificationFormat::kSimple;
  }
  Classification c = format == ClassificationFormat::kCla
                         ? ParseCla(text, source_name)
                         : ParseSimple(text, source_name);
  c.set_source(source_name, format);
  return c;
}

Classification LoadClassification(const std::string& path,
                                  ClassificationFormat format) {
  return ParseClassification(internal::ReadFile(path), format, path);
}

std::vector<Diagnostic> ValidateClassification(const Classification& c) {
  std::vector<Diagnostic> out;
  if (c.class_count() == 0) {
    out.push_back({Severity::kError, "classification has no classes"});
  }
  std::size_t total = 0;
  for (const auto& cls : c.classes()) {
    total += cls.members.size();
    if (cls.members.empty()) {
      out.push_back({Severity::kError,
                     fmt::format("class '{}' is empty", cls.label)});
    } else if (cls.members.size() == 1) {
      out.push_back({Severity::kWarning,
                     fmt::format("class '{}' has a single member; its query has "
                                 "no relevant objects",
                                 cls.label)});
    }
  }
  if (total != c.object_count()) {
    out.push_back({Severity::kError,
                   fmt::format("class sizes sum to {} but {} objects are "
                               "classified",
                               total, c.object_count())});
  }
  if (auto declared = c.declared_object_count();
      declared && *declared != c.object_count()) {
    out.push_back({Severity::kError,
                   fmt::format("header lists {} model(s) but {} are assigned to "
                               "a class",
                               *declared, c.object_count())});
  }
  return out;
}

ClassStats ComputeClassStats(const Classification& c) {
  ClassStats stats;
  stats.class_count = c.class_count();
  stats.object_count = c.object_count();
  for (const auto& cls : c.classes()) {
    const std::size_t n = cls.members.size();
    ++stats.size_histogram[n];
    stats.min_class_size = std::min(stats.min_class_size.value_or(n), n);
    stats.max_class_size = std::max(stats.max_class_size.value_or(n), n);
  }
  return stats;
}

std::string SerializeSimple(const Classification& c) {
  std::string out;
  for (const auto& cls : c.classes()) {
    for (const auto& m : cls.members) {
      out += m;
      out += ' ';
      out += cls.label;
      out += '\n';
    }
  }
  return out;
}

std::string SerializeCla(const Classification& c) {
  std::string out =
      fmt::format("PSB 1\n{} {}\n", c.class_count(), c.object_count());
  for (const auto& cls : c.classes()) {
    out += fmt::format("\n{} 0 {}\n", cls.label, cls.members.size());
    for (const auto& m : cls.members) {
      out += m;
      out += '\n';
    }
  }
  return out;
}

}  // namespace shapeeval
