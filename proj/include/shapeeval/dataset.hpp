#ifndef SHAPEEVAL_DATASET_HPP_
#define SHAPEEVAL_DATASET_HPP_

// Ground-truth classifications: which class every benchmark object belongs
// to. Two on-disk formats are supported.
//
// simple: one record per line, `object_id <whitespace> class_label`. Text
//   after '#' is a comment, blank lines are ignored, LF or CRLF endings.
//
// cla: the hierarchical format used by the Princeton Shape Benchmark.
//     PSB 1
//     <num_classes> <num_models>
//     <class_name> <parent_name> <count>
//     <id>            (count lines)
//     ...
//   Parent links are ignored on load; classes with zero members that are
//   named as another class's parent are dropped (interior nodes).

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shapeeval/error.hpp"

namespace shapeeval {

using ObjectId = std::string;
using ClassLabel = std::string;

enum class ClassificationFormat { kAuto, kSimple, kCla };

std::string_view FormatName(ClassificationFormat format);
ClassificationFormat ParseClassificationFormat(std::string_view name);

struct ObjectClass {
  ClassLabel label;
  std::vector<ObjectId> members;  // file order

  bool operator==(const ObjectClass&) const = default;
};

// Flat object -> class mapping. Immutable once built; every object belongs to
// exactly one class.
class Classification {
 public:
  Classification() = default;

  // Appends `object` to `label`, creating the class on first use. Throws
  // InputError if the object is already classified or either token is not a
  // valid identifier.
  void Add(const ObjectId& object, const ClassLabel& label);

  // Registers a class with no members yet (cla blocks may be empty).
  void AddClass(const ClassLabel& label);

  // Classes in order of first appearance.
  const std::vector<ObjectClass>& classes() const { return classes_; }
  std::size_t class_count() const { return classes_.size(); }
  std::size_t object_count() const { return class_of_.size(); }

  // nullptr if `object` is unclassified.
  const ObjectClass* ClassOf(std::string_view object) const;
  const ObjectClass* FindClass(std::string_view label) const;
  bool Contains(std::string_view object) const {
    return ClassOf(object) != nullptr;
  }

  // Every classified object, class by class in file order.
  std::vector<ObjectId> Objects() const;

  // Sorted object -> label view.
  std::map<ObjectId, ClassLabel> Entries() const;

  const std::string& source_path() const { return source_path_; }
  ClassificationFormat format() const { return format_; }
  // Model count announced by a cla header, if any.
  std::optional<std::size_t> declared_object_count() const {
    return declared_object_count_;
  }

  void set_source(std::string path, ClassificationFormat format) {
    source_path_ = std::move(path);
    format_ = format;
  }
  void set_declared_object_count(std::optional<std::size_t> n) {
    declared_object_count_ = n;
  }

  // Compares class structure only (labels, members, order).
  bool operator==(const Classification& other) const {
    return classes_ == other.classes_;
  }

 private:
  std::vector<ObjectClass> classes_;
  std::unordered_map<ClassLabel, std::size_t> class_index_;
  std::unordered_map<ObjectId, std::size_t> class_of_;
  std::string source_path_;
  ClassificationFormat format_ = ClassificationFormat::kSimple;
  std::optional<std::size_t> declared_object_count_;
};

struct ClassStats {
  std::size_t class_count = 0;
  std::size_t object_count = 0;
  std::optional<std::size_t> min_class_size;  // absent when empty
  std::optional<std::size_t> max_class_size;
  std::map<std::size_t, std::size_t> size_histogram;  // size -> class count

  bool operator==(const ClassStats&) const = default;
};

// True for a non-empty token without whitespace or '#'.
bool IsValidIdentifier(std::string_view token);

Classification ParseClassification(std::string_view text,
                                   ClassificationFormat format,
                                   const std::string& source_name = "<input>");

Classification LoadClassification(
    const std::string& path,
    ClassificationFormat format = ClassificationFormat::kAuto);

std::vector<Diagnostic> ValidateClassification(const Classification& c);

ClassStats ComputeClassStats(const Classification& c);

std::string SerializeSimple(const Classification& c);
std::string SerializeCla(const Classification& c);

}  // namespace shapeeval

#endif  // SHAPEEVAL_DATASET_HPP_
