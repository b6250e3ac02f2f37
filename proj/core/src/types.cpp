#include "annosel/types.hpp"

#include <cmath>
#include <stdexcept>

namespace annosel {

AnnotationType type_from_code(char code) {
  switch (code) {
    case 's':
      return AnnotationType::kSegmentation;
    case 'l':
      return AnnotationType::kLandmarks;
    case 'd':
      return AnnotationType::kDetection;
    default:
      throw std::invalid_argument(std::string("unknown annotation type code '") + code + "'");
  }
}

SelectionMask SelectionMask::parse(std::string_view text) {
  if (text.size() != kNumAnnotationTypes) {
    throw std::invalid_argument("annotation mask must be 3 characters, got \"" +
                                std::string(text) + "\"");
  }
  SelectionMask mask;
  for (std::size_t i = 0; i < kNumAnnotationTypes; ++i) {
    if (text[i] == '1') {
      mask.set(kAnnotationTypes[i]);
    } else if (text[i] != '0') {
      throw std::invalid_argument("annotation mask must contain only 0/1, got \"" +
                                  std::string(text) + "\"");
    }
  }
  return mask;
}

std::string SelectionMask::to_string() const {
  std::string out(kNumAnnotationTypes, '0');
  for (std::size_t i = 0; i < kNumAnnotationTypes; ++i) {
    if (test(kAnnotationTypes[i])) {
      out[i] = '1';
    }
  }
  return out;
}

Pool::Pool(std::vector<SampleRecord> samples) : samples_(std::move(samples)) {
  index_by_id_.reserve(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const SampleRecord& sample = samples_[i];
    if (sample.id.empty()) {
      throw std::invalid_argument("sample at index " + std::to_string(i) + " has an empty id");
    }
    if (!index_by_id_.emplace(sample.id, i).second) {
      throw std::invalid_argument("duplicate sample id \"" + sample.id + "\"");
    }
    if (sample.features.empty()) {
      throw std::invalid_argument("sample \"" + sample.id + "\" has no features");
    }
    if (i == 0) {
      feature_dim_ = sample.features.size();
    } else if (sample.features.size() != feature_dim_) {
      throw std::invalid_argument("sample \"" + sample.id + "\" has " +
                                  std::to_string(sample.features.size()) +
                                  " features, expected " + std::to_string(feature_dim_));
    }
    for (double f : sample.features) {
      if (!std::isfinite(f)) {
        throw std::invalid_argument("sample \"" + sample.id + "\" has a non-finite feature");
      }
    }
    for (AnnotationType type : kAnnotationTypes) {
      const double u = sample.uncertainty[type];
      if (!std::isfinite(u) || u < 0.0) {
        throw std::invalid_argument("sample \"" + sample.id +
                                    "\" has an invalid uncertainty for type '" +
                                    std::string(1, type_code(type)) + "'");
      }
    }
  }
}

bool Pool::contains(std::string_view id) const {
  return index_by_id_.find(std::string(id)) != index_by_id_.end();
}

std::size_t Pool::index_of(std::string_view id) const {
  auto it = index_by_id_.find(std::string(id));
  if (it == index_by_id_.end()) {
    throw std::invalid_argument("unknown sample id \"" + std::string(id) + "\"");
  }
  return it->second;
}

std::vector<std::size_t> Pool::labeled_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].annotated.any()) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<std::size_t> Pool::candidate_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].annotated != SelectionMask::all()) {
      out.push_back(i);
    }
  }
  return out;
}

CountTriple Pool::annotation_counts() const {
  CountTriple counts;
  for (const SampleRecord& sample : samples_) {
    for (AnnotationType type : kAnnotationTypes) {
      if (sample.annotated.test(type)) {
        ++counts[type];
      }
    }
  }
  return counts;
}

void Pool::grant(std::size_t index, SelectionMask mask) {
  if (index >= samples_.size()) {
    throw std::invalid_argument("grant index " + std::to_string(index) + " out of range");
  }
  SampleRecord& sample = samples_[index];
  if (mask.overlaps(sample.annotated)) {
    throw std::invalid_argument("sample \"" + sample.id +
                                "\" already has one of the requested annotation types");
  }
  sample.annotated = sample.annotated | mask;
}

}  // namespace annosel
