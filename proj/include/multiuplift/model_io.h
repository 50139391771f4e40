/*
 * Copyright 2026 The multiuplift Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MULTIUPLIFT_MODEL_IO_H_
#define MULTIUPLIFT_MODEL_IO_H_

// Plain-text model documents.
//
// Every line is a keyword followed by tab-separated values; reals use 17
// significant digits. A linear model:
//
//   begin  <name>
//   kind   logistic | ridge
//   features  <name>...
//   intercept <v>
//   weights   <v>...
//   end    <name>
//
// A calibrated learner nests `folds` linear models, each followed by
// `isotonic_x` / `isotonic_y` knot arrays. A meta-model file starts with
// the line "multiuplift-model<TAB>1". A model directory holds
// manifest.txt plus one treatment_<t>.model per treatment label.

#include <filesystem>
#include <string>

#include "multiuplift/metalearn.h"

namespace multiuplift {

inline constexpr int kModelFormatVersion = 1;

std::string SerializeMetaModel(const FittedMetaModel& model);
FittedMetaModel ParseMetaModel(const std::string& text);

std::string SerializeManifest(const MultiTreatmentModel& model);

// Writes into a sibling temporary directory and renames it over `dir`.
void SaveModelDirectory(const MultiTreatmentModel& model, const std::filesystem::path& dir);
MultiTreatmentModel LoadModelDirectory(const std::filesystem::path& dir);

}  // namespace multiuplift

#endif  // MULTIUPLIFT_MODEL_IO_H_
