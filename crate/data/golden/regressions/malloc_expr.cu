cudaMalloc((void ** ) &data_gpu, sizeof(DATA_TYPE)*(M+1)*(N+1));
