#include <ap_int.h>

void top_module(ap_uint<8> bin, ap_uint<8>& gray) {
    gray = bin ^ (bin >> 1);
}
