// Copyright 2026 The recnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "recnet/attractiveness.hpp"
#include "recnet/error.hpp"
#include "recnet/experiments.hpp"
#include "recnet/fitting.hpp"
#include "recnet/generator.hpp"
#include "recnet/io.hpp"
#include "recnet/number_format.hpp"
#include "recnet/prefix_sum_tree.hpp"
#include "recnet/quality.hpp"
#include "recnet/stats.hpp"
#include "recnet/theory.hpp"
