#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace annosel {

// Annotation modes in canonical order: segmentation, landmarks, detection.
// Every triple, mask string and serialized column follows this order.
enum class AnnotationType : std::uint8_t {
  kSegmentation = 0,
  kLandmarks = 1,
  kDetection = 2,
};

inline constexpr std::size_t kNumAnnotationTypes = 3;

inline constexpr std::array<AnnotationType, kNumAnnotationTypes> kAnnotationTypes = {
    AnnotationType::kSegmentation,
    AnnotationType::kLandmarks,
    AnnotationType::kDetection,
};

constexpr std::size_t type_index(AnnotationType type) noexcept {
  return static_cast<std::size_t>(type);
}

constexpr char type_code(AnnotationType type) noexcept {
  constexpr std::array<char, kNumAnnotationTypes> codes = {'s', 'l', 'd'};
  return codes[type_index(type)];
}

// Maps 's'/'l'/'d' back to the enum; throws std::invalid_argument otherwise.
AnnotationType type_from_code(char code);

// One scalar per annotation type, stored in canonical order.
template <typename T>
struct TypeTriple {
  std::array<T, kNumAnnotationTypes> values{};

  constexpr TypeTriple() = default;
  constexpr TypeTriple(T seg, T lmk, T det) : values{seg, lmk, det} {}

  constexpr T& operator[](AnnotationType type) { return values[type_index(type)]; }
  constexpr const T& operator[](AnnotationType type) const { return values[type_index(type)]; }

  constexpr T sum() const { return values[0] + values[1] + values[2]; }

  friend constexpr bool operator==(const TypeTriple&, const TypeTriple&) = default;
};

using CostTriple = TypeTriple<std::int64_t>;        // integer cost units, >= 0
using ValueTriple = TypeTriple<double>;             // IoU-gain units, >= 0
using UncertaintyTriple = TypeTriple<double>;       // unitless, >= 0
using CountTriple = TypeTriple<std::int64_t>;       // annotation counts, >= 0

// Subset of annotation types. Doubles as the per-round request vector and as
// the "already annotated" record on a sample. rank() enumerates the 8 states
// in canonical subset order: "000" < "001" < ... < "111" read as (s,l,d).
class SelectionMask {
 public:
  constexpr SelectionMask() = default;

  static constexpr SelectionMask all() { return SelectionMask(0b111); }

  // rank must be < 8.
  static constexpr SelectionMask from_rank(unsigned rank) {
    return SelectionMask(static_cast<std::uint8_t>(rank & 0b111));
  }

  // Parses a 3-character {0,1} string in (s,l,d) order, e.g. "101" = {s,d}.
  static SelectionMask parse(std::string_view text);

  constexpr bool test(AnnotationType type) const { return (bits_ & bit_of(type)) != 0; }

  constexpr SelectionMask& set(AnnotationType type) {
    bits_ |= bit_of(type);
    return *this;
  }

  constexpr bool any() const { return bits_ != 0; }
  constexpr bool none() const { return bits_ == 0; }

  constexpr int count() const {
    return static_cast<int>((bits_ & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1));
  }

  constexpr bool overlaps(SelectionMask other) const { return (bits_ & other.bits_) != 0; }
  constexpr bool subset_of(SelectionMask other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr SelectionMask operator|(SelectionMask other) const {
    return SelectionMask(static_cast<std::uint8_t>(bits_ | other.bits_));
  }

  // Complement within the three types.
  constexpr SelectionMask missing() const {
    return SelectionMask(static_cast<std::uint8_t>(~bits_ & 0b111));
  }

  constexpr unsigned rank() const { return bits_; }

  std::string to_string() const;

  friend constexpr bool operator==(SelectionMask, SelectionMask) = default;
  friend constexpr auto operator<=>(SelectionMask, SelectionMask) = default;

 private:
  constexpr explicit SelectionMask(std::uint8_t bits) : bits_(bits) {}

  static constexpr std::uint8_t bit_of(AnnotationType type) {
    return static_cast<std::uint8_t>(1u << (2 - type_index(type)));
  }

  std::uint8_t bits_ = 0;  // bit 2 = s, bit 1 = l, bit 0 = d
};

// One image stand-in: identity, feature embedding, per-type uncertainty and
// the annotation types it already has.
struct SampleRecord {
  std::string id;
  std::vector<double> features;
  UncertaintyTriple uncertainty;
  SelectionMask annotated;
};

// Validated collection of samples. Ids are unique, feature dimensions agree,
// uncertainties are finite and non-negative. A sample is "labeled" when any
// annotation bit is set and a "candidate" when any bit is unset; partially
// annotated samples appear in both views.
class Pool {
 public:
  Pool() = default;
  explicit Pool(std::vector<SampleRecord> samples);

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  std::size_t feature_dim() const { return feature_dim_; }

  const std::vector<SampleRecord>& samples() const { return samples_; }
  const SampleRecord& operator[](std::size_t index) const { return samples_[index]; }

  bool contains(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;  // throws std::invalid_argument

  std::vector<std::size_t> labeled_indices() const;
  std::vector<std::size_t> candidate_indices() const;

  // Number of set annotation bits per type across the pool.
  CountTriple annotation_counts() const;

  // Sets the requested bits on one sample. Bits only ever flip from unset to
  // set; requesting an already-set bit throws std::invalid_argument.
  void grant(std::size_t index, SelectionMask mask);

 private:
  std::vector<SampleRecord> samples_;
  std::unordered_map<std::string, std::size_t> index_by_id_;
  std::size_t feature_dim_ = 0;
};

}  // namespace annosel
