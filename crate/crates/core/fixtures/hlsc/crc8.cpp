#include <ap_int.h>

/* CRC-8 with polynomial x^8 + x^2 + x + 1,
   processed one byte per call */
void top_module(ap_uint<8> data, bool init, ap_uint<8>& crc) {
    static ap_uint<8> reg = 0;
    if (init) {
        reg = 0;
    }
    ap_uint<8> c = reg ^ data;
    for (int i = 0; i < 8; i++) {
        if (c[7]) {
            c = (c << 1) ^ 0x07;
        } else {
            c = c << 1;
        }
    }
    reg = c;
    crc = reg;
}
