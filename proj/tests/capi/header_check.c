/* Compiled as C to keep the public header C-clean. */
#include "bcr/bcr.h"

const char* bcr_c_header_version(void) { return bcr_version(); }
