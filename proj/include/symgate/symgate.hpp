// Copyright 2026 The Symgate Authors
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

#include "symgate/config.hpp"
#include "symgate/encoding.hpp"
#include "symgate/errors.hpp"
#include "symgate/lie.hpp"
#include "symgate/matrix.hpp"
#include "symgate/optim.hpp"
#include "symgate/runner.hpp"
#include "symgate/serialize.hpp"
#include "symgate/spin.hpp"
#include "symgate/symmetry.hpp"
#include "symgate/synthesis.hpp"
#include "symgate/version.hpp"
