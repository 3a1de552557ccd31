class Sensor {
public:
    float reading;
    int id;
};
