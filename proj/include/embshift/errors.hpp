// Copyright 2026 The embshift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMBSHIFT_ERRORS_HPP_
#define EMBSHIFT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace embshift {

// Root of every error this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define EMBSHIFT_DEFINE_ERROR(Name)                         \
  class Name : public Error {                               \
   public:                                                  \
    explicit Name(const std::string& msg) : Error(msg) {}   \
  }

// Shared domain validation.
EMBSHIFT_DEFINE_ERROR(InvalidArgument);
EMBSHIFT_DEFINE_ERROR(MisalignedSets);
EMBSHIFT_DEFINE_ERROR(DimMismatch);

// File formats.
EMBSHIFT_DEFINE_ERROR(UnsupportedFormat);
EMBSHIFT_DEFINE_ERROR(CorruptFile);
EMBSHIFT_DEFINE_ERROR(IoFailure);
EMBSHIFT_DEFINE_ERROR(BadMagic);
EMBSHIFT_DEFINE_ERROR(LengthMismatch);
EMBSHIFT_DEFINE_ERROR(SidecarMismatch);

// Signal processing.
EMBSHIFT_DEFINE_ERROR(CutoffOutOfRange);
EMBSHIFT_DEFINE_ERROR(PercentOutOfRange);
EMBSHIFT_DEFINE_ERROR(ClipTooShort);

// Shift metrics.
EMBSHIFT_DEFINE_ERROR(ZeroNormVector);
EMBSHIFT_DEFINE_ERROR(TooFewPoints);
EMBSHIFT_DEFINE_ERROR(DegenerateDendrogram);
EMBSHIFT_DEFINE_ERROR(NonFiniteResult);
EMBSHIFT_DEFINE_ERROR(DegenerateRange);

// Downstream evaluation.
EMBSHIFT_DEFINE_ERROR(LabelMismatch);
EMBSHIFT_DEFINE_ERROR(ModeMismatch);
EMBSHIFT_DEFINE_ERROR(NoEvaluableClasses);
EMBSHIFT_DEFINE_ERROR(TooFewClasses);

// Pipeline configuration.
EMBSHIFT_DEFINE_ERROR(ConfigError);
EMBSHIFT_DEFINE_ERROR(EmbedDatasetError);

#undef EMBSHIFT_DEFINE_ERROR

}  // namespace embshift

#endif  // EMBSHIFT_ERRORS_HPP_
