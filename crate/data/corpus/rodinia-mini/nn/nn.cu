#include <stdio.h>
#include <float.h>

typedef struct latLong
{
    float lat;
    float lng;
} LatLong;

typedef struct record
{
    char recString[53];
    float distance;
} Record;

__global__ void euclid(LatLong *d_locations, float *d_distances, int numRecords, float lat, float lng)
{
    int globalId = blockDim.x * (gridDim.x * blockIdx.y + blockIdx.x) + threadIdx.x;
    LatLong *latLong = d_locations + globalId;
    if (globalId < numRecords) {
        float *dist = d_distances + globalId;
        *dist = (float)sqrt((lat - latLong->lat) * (lat - latLong->lat) + (lng - latLong->lng) * (lng - latLong->lng));
    }
}

void findLowest(Record *records, float *distances, int numRecords, int topN)
{
    int i, j;
    float val;
    int minLoc;
    Record *tempRec;
    float tempDist;

    for (i = 0; i < topN; i++) {
        minLoc = i;
        for (j = i; j < numRecords; j++) {
            val = distances[j];
            if (val < distances[minLoc]) minLoc = j;
        }
        tempRec = &records[i];
        records[i] = records[minLoc];
        records[minLoc] = *tempRec;

        tempDist = distances[i];
        distances[i] = distances[minLoc];
        distances[minLoc] = tempDist;

        records[i].distance = distances[i];
    }
}

int run(LatLong *locations, Record *records, int numRecords, float lat, float lng, int resultsCount)
{
    unsigned long maxGridX = 65535;
    unsigned long blocks = (numRecords + 255) / 256;
    dim3 gridDim(blocks > maxGridX ? maxGridX : blocks, (blocks + maxGridX - 1) / maxGridX);
    size_t threadsPerBlock = 256;

    float *distances = (float *)malloc(sizeof(float) * numRecords);

    LatLong *d_locations;
    float *d_distances;
    cudaMalloc((void **) &d_locations, sizeof(LatLong) * numRecords);
    cudaMalloc((void **) &d_distances, sizeof(float) * numRecords);

    cudaMemcpy(d_locations, &locations[0], sizeof(LatLong) * numRecords, cudaMemcpyHostToDevice);

    euclid<<<gridDim, threadsPerBlock>>>(d_locations, d_distances, numRecords, lat, lng);
    cudaThreadSynchronize();

    cudaMemcpy(distances, d_distances, sizeof(float) * numRecords, cudaMemcpyDeviceToHost);

    findLowest(records, distances, numRecords, resultsCount);

    for (int i = 0; i < resultsCount; i++) {
        printf("%s --> Distance=%f\n", records[i].recString, records[i].distance);
    }
    free(distances);
    cudaFree(d_locations);
    cudaFree(d_distances);
    return 0;
}
