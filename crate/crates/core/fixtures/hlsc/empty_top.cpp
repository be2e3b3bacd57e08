void top_module() {}
