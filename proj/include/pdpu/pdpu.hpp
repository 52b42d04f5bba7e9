// Copyright 2026 The pdpu Authors
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

#include "pdpu/accuracy.hpp"
#include "pdpu/big_uint.hpp"
#include "pdpu/codec.hpp"
#include "pdpu/csa.hpp"
#include "pdpu/engine.hpp"
#include "pdpu/exact.hpp"
#include "pdpu/format.hpp"
#include "pdpu/oracle.hpp"
#include "pdpu/wide_int.hpp"
