#include <stdio.h>

#define TILE_DIM 32
#define BLOCK_ROWS 8

// Coalesced transpose through a shared-memory tile.
__global__ void transposeCoalesced(float *odata, const float *idata, int width, int height)
{
    __shared__ float tile[TILE_DIM][TILE_DIM + 1];

    int xIndex = blockIdx.x * TILE_DIM + threadIdx.x;
    int yIndex = blockIdx.y * TILE_DIM + threadIdx.y;
    int index_in = xIndex + (yIndex) * width;

    for (int i = 0; i < TILE_DIM; i += BLOCK_ROWS) {
        tile[threadIdx.y + i][threadIdx.x] = idata[index_in + i * width];
    }

    __syncthreads();

    xIndex = blockIdx.y * TILE_DIM + threadIdx.x;
    yIndex = blockIdx.x * TILE_DIM + threadIdx.y;
    int index_out = xIndex + (yIndex) * height;

    for (int i = 0; i < TILE_DIM; i += BLOCK_ROWS) {
        odata[index_out + i * height] = tile[threadIdx.x][threadIdx.y + i];
    }
}

int main(int argc, char **argv)
{
    const int size_x = 2048, size_y = 2048;
    const int mem_size = sizeof(float) * size_x * size_y;

    float *h_idata = (float *) malloc(mem_size);
    float *h_odata = (float *) malloc(mem_size);

    float *d_idata;
    float *d_odata;
    cudaMalloc((void **) &d_idata, mem_size);
    cudaMalloc((void **) &d_odata, mem_size);

    for (int i = 0; i < (size_x * size_y); ++i) {
        h_idata[i] = (float) i;
    }

    cudaMemcpy(d_idata, h_idata, mem_size, cudaMemcpyHostToDevice);

    dim3 grid(size_x / TILE_DIM, size_y / TILE_DIM), threads(TILE_DIM, BLOCK_ROWS);
    transposeCoalesced<<<grid, threads>>>(d_odata, d_idata, size_x, size_y);
    cudaDeviceSynchronize();

    cudaMemcpy(h_odata, d_odata, mem_size, cudaMemcpyDeviceToHost);

    bool ok = true;
    for (int i = 0; i < size_x && ok; i++) {
        for (int j = 0; j < size_y; j++) {
            ok = ok && (h_odata[i * size_y + j] == h_idata[j * size_x + i]);
        }
    }
    printf(ok ? "PASSED\n" : "FAILED\n");

    free(h_idata);
    free(h_odata);
    cudaFree(d_idata);
    cudaFree(d_odata);
    return ok ? 0 : 1;
}
