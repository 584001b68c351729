float* A_gpu;
cudaMalloc((void **) &A_gpu, sizeof(DATA_TYPE) * NI * NJ);
