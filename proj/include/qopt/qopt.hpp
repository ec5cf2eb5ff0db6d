// Copyright 2026 The qopt Authors
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

#include "qopt/bloch.hpp"
#include "qopt/constrained.hpp"
#include "qopt/error.hpp"
#include "qopt/io.hpp"
#include "qopt/multicontrol.hpp"
#include "qopt/oracle.hpp"
#include "qopt/protocol.hpp"
#include "qopt/simulator.hpp"
#include "qopt/su2.hpp"
#include "qopt/unconstrained.hpp"
#include "qopt/version.hpp"
