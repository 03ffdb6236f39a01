// Copyright 2026 obsent contributors
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

#include "obsent/entropy.hpp"
#include "obsent/errors.hpp"
#include "obsent/hermitian.hpp"
#include "obsent/io.hpp"
#include "obsent/quantum.hpp"
#include "obsent/recovery.hpp"
#include "obsent/sampling.hpp"
#include "obsent/theorems.hpp"
#include "obsent/tolerances.hpp"
#include "obsent/verify.hpp"
