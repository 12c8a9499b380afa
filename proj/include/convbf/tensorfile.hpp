// convbf/tensorfile.hpp

// Copyright 2026  convbf authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CONVBF_TENSORFILE_HPP_
#define CONVBF_TENSORFILE_HPP_

#include <map>
#include <string>
#include <vector>

#include "convbf/scene.hpp"
#include "convbf/types.hpp"

namespace convbf {

// One named array in a .cbt container: float64 or complex128, row-major in
// the order of dims.
struct Tensor {
  std::vector<uint64_t> dims;
  std::vector<double> real;
  std::vector<Complex> cplx;
  bool is_complex = false;

  size_t count() const {
    size_t n = 1;
    for (uint64_t d : dims) n *= d;
    return n;
  }
};

using TensorMap = std::map<std::string, Tensor>;

void write_tensor_file(const std::string& path, const TensorMap& tensors);
TensorMap read_tensor_file(const std::string& path);

// Full scene ground truth as a tensor container, for regression fixtures.
void save_scene(const std::string& path, const SceneTruth& truth);
SceneTruth load_scene(const std::string& path);

}  // namespace convbf

#endif  // CONVBF_TENSORFILE_HPP_
