#pragma once

#define LEXGUARD_VERSION "0.1.0"
