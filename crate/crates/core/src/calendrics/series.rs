// Generated from the VSOP87D Earth series (heliocentric, equinox of date).
// Terms are (amplitude x 1e-8, phase rad, frequency rad per Julian millennium).
// Longitude terms below 10e-8 rad and radius terms below 100e-8 AU are dropped.
// Phases are published values; some happen to be close to π.
#![allow(clippy::approx_constant)]

pub(crate) const EARTH_L: [&[(f64, f64, f64)]; 5] = [
    &[
        (175347045.673, 0.0, 0.0),
        (3341656.456, 4.66925680417, 6283.0758499914),
        (34894.275, 4.62610241759, 12566.1516999828),
        (3417.571, 2.82886579606, 3.523118349),
        (3497.056, 2.74411800971, 5753.3848848968),
        (3135.896, 3.62767041758, 77713.7714681205),
        (2676.218, 4.41808351397, 7860.4193924392),
        (2342.687, 6.13516237631, 3930.2096962196),
        (1273.166, 2.03709655772, 529.6909650946),
        (1324.292, 0.74246356352, 11506.7697697936),
        (901.855, 2.04505443513, 26.2983197998),
        (1199.167, 1.10962944315, 1577.3435424478),
        (857.223, 3.50849156957, 398.1490034082),
        (779.786, 1.17882652114, 5223.6939198022),
        (990.25, 5.23268129594, 5884.9268465832),
        (753.141, 2.53339053818, 5507.5532386674),
        (505.264, 4.58292563052, 18849.2275499742),
        (492.379, 4.20506639861, 775.522611324),
        (356.655, 2.91954116867, 0.0673103028),
        (284.125, 1.89869034186, 796.2980068164),
        (242.81, 0.34481140906, 5486.777843175),
        (317.087, 5.84901952218, 11790.6290886588),
        (271.039, 0.31488607649, 10977.078804699),
        (206.16, 4.80646606059, 2544.3144198834),
        (205.385, 1.86947813692, 5573.1428014331),
        (202.261, 2.45767795458, 6069.7767545534),
        (126.184, 1.0830263021, 20.7753954924),
        (155.516, 0.83306073807, 213.299095438),
        (115.132, 0.64544911683, 0.9803210682),
        (102.851, 0.63599846727, 4694.0029547076),
        (101.724, 4.26679821365, 7.1135470008),
        (99.206, 6.20992940258, 2146.1654164752),
        (132.212, 3.41118275555, 2942.4634232916),
        (97.607, 0.6810127227, 155.4203994342),
        (85.128, 1.29870743025, 6275.9623029906),
        (74.651, 1.75508916159, 5088.6288397668),
        (101.895, 0.97569221824, 15720.8387848784),
        (84.711, 3.67080093025, 71430.69561812909),
        (73.547, 4.67926565481, 801.8209311238),
        (73.874, 3.50319443167, 3154.6870848956),
        (78.756, 3.03698313141, 12036.4607348882),
        (79.637, 1.807913307, 17260.1546546904),
        (85.803, 5.98322631256, 161000.6857376741),
        (56.963, 2.78430398043, 6286.5989683404),
        (61.148, 1.81839811024, 7084.8967811152),
        (69.627, 0.83297596966, 9437.762934887),
        (56.116, 4.38694880779, 14143.4952424306),
        (62.449, 3.97763880587, 8827.3902698748),
        (51.145, 0.28306864501, 5856.4776591154),
        (55.577, 3.47006009062, 6279.5527316424),
        (41.036, 5.36817351402, 8429.2412664666),
        (51.605, 1.33282746983, 1748.016413067),
        (51.992, 0.18914945834, 12139.5535091068),
        (49.0, 0.48735065033, 1194.4470102246),
        (39.2, 6.16832995016, 10447.3878396044),
        (35.566, 1.77597314691, 6812.766815086),
        (36.77, 6.04133859347, 10213.285546211),
        (36.596, 2.56955238628, 1059.3819301892),
        (33.291, 0.59309499459, 17789.845619785),
        (35.954, 1.70876111898, 2352.8661537718),
        (40.938, 2.39850881707, 19651.048481098),
        (30.047, 2.73975123935, 1349.8674096588),
        (30.412, 0.44294464135, 83996.84731811189),
        (23.663, 0.48473567763, 8031.0922630584),
        (23.574, 2.06527720049, 3340.6124266998),
        (21.089, 4.14825464101, 951.7184062506),
        (24.738, 0.21484762138, 3.5904286518),
        (25.352, 3.16470953405, 4690.4798363586),
        (22.82, 5.22197888032, 4705.7323075436),
        (21.419, 1.42563735525, 16730.4636895958),
        (21.891, 5.55594302562, 553.5694028424),
        (17.481, 4.56052900359, 135.0650800354),
        (19.925, 5.22208471269, 12168.0026965746),
        (19.86, 5.77470167653, 6309.3741697912),
        (20.3, 0.37133792946, 283.8593188652),
        (14.421, 4.19315332546, 242.728603974),
        (16.225, 5.98837722564, 11769.8536931664),
        (15.077, 4.19567181073, 6256.7775301916),
        (19.124, 3.82219996949, 23581.2581773176),
        (18.888, 5.38626880969, 149854.4001348079),
        (14.346, 3.72355084422, 38.0276726358),
        (17.898, 2.21490735647, 13367.9726311066),
        (12.054, 2.62229588349, 955.5997416086),
        (11.287, 0.17739328092, 4164.311989613),
        (13.971, 4.40138139996, 6681.2248533996),
        (13.621, 1.88934471407, 7632.9432596502),
        (12.503, 1.13052412208, 5.5229243074),
        (10.498, 5.35909518669, 1592.5960136328),
        (10.327, 6.19982566125, 6438.4962494256),
        (12.003, 1.003514567, 632.7837393132),
        (10.827, 0.32734520222, 103.0927742186),
        (10.005, 6.0291496328, 5746.271337896),
        (10.523, 0.93871805506, 11926.2544136688),
    ],
    &[
        (628331966747.491, 0.0, 0.0),
        (206058.863, 2.67823455584, 6283.0758499914),
        (4303.43, 2.63512650414, 12566.1516999828),
        (425.264, 1.59046980729, 3.523118349),
        (108.977, 2.96618001993, 1577.3435424478),
        (93.478, 2.59212835365, 18849.2275499742),
        (119.261, 5.79557487799, 26.2983197998),
        (72.122, 1.13846158196, 529.6909650946),
        (67.768, 1.87472304791, 398.1490034082),
        (67.327, 4.40918235168, 5507.5532386674),
        (59.027, 2.8879703846, 5223.6939198022),
        (55.976, 2.17471680261, 155.4203994342),
        (45.407, 0.39803079805, 796.2980068164),
        (36.369, 0.46624739835, 775.522611324),
        (28.958, 2.64707383882, 7.1135470008),
        (19.097, 1.84628332577, 5486.777843175),
        (20.844, 5.34138275149, 0.9803210682),
        (18.508, 4.96855124577, 213.299095438),
        (16.233, 0.03216483047, 2544.3144198834),
        (17.293, 2.99116864949, 6275.9623029906),
        (15.832, 1.43049285325, 2146.1654164752),
        (14.615, 1.20532366323, 10977.078804699),
        (11.877, 3.25804815607, 5088.6288397668),
        (11.514, 2.07502418155, 4694.0029547076),
        (12.461, 2.83432285512, 1748.016413067),
        (11.808, 5.2737979048, 1194.4470102246),
        (10.641, 0.76614199202, 553.5694028424),
    ],
    &[
        (52918.87, 0.0, 0.0),
        (8719.837, 1.07209665242, 6283.0758499914),
        (309.125, 0.86728818832, 12566.1516999828),
        (27.339, 0.05297871691, 3.523118349),
        (16.334, 5.18826691036, 26.2983197998),
        (15.752, 3.6845788943, 155.4203994342),
    ],
    &[
        (289.226, 5.84384198723, 6283.0758499914),
        (34.955, 0.0, 0.0),
        (16.819, 5.48766912348, 12566.1516999828),
    ],
    &[(114.084, 3.14159265359, 0.0)],
];

pub(crate) const EARTH_R: [&[(f64, f64, f64)]; 3] = [
    &[
        (100013988.799, 0.0, 0.0),
        (1670699.626, 3.09846350771, 6283.0758499914),
        (13956.023, 3.0552460962, 12566.1516999828),
        (3083.72, 5.19846674381, 77713.7714681205),
        (1628.461, 1.17387749012, 5753.3848848968),
        (1575.568, 2.84685245825, 7860.4193924392),
        (924.799, 5.45292234084, 11506.7697697936),
        (542.444, 4.56409149777, 3930.2096962196),
        (472.11, 3.66100022149, 5884.9268465832),
        (328.78, 5.89983646482, 5223.6939198022),
        (345.983, 0.96368617687, 5507.5532386674),
        (306.784, 0.29867139512, 5573.1428014331),
        (174.844, 3.01193636534, 18849.2275499742),
        (243.189, 4.27349536153, 11790.6290886588),
        (211.829, 5.84714540314, 1577.3435424478),
        (185.752, 5.02194447178, 10977.078804699),
        (109.835, 5.05510636285, 5486.777843175),
    ],
    &[
        (103018.608, 1.10748969588, 6283.0758499914),
        (1721.238, 1.06442301418, 12566.1516999828),
        (702.215, 3.14159265359, 0.0),
    ],
    &[
        (4359.385, 5.78455133738, 6283.0758499914),
        (123.633, 5.57934722157, 12566.1516999828),
    ],
];

// IAU 1980 nutation in longitude: multipliers of (D, M, M', F, Omega), then
// coefficients in units of 0.0001 arcsec (constant, per Julian century).
pub(crate) const NUTATION_LONGITUDE: [([i8; 5], f64, f64); 63] = [
    ([0, 0, 0, 0, 1], -171996.0, -174.2),
    ([-2, 0, 0, 2, 2], -13187.0, -1.6),
    ([0, 0, 0, 2, 2], -2274.0, -0.2),
    ([0, 0, 0, 0, 2], 2062.0, 0.2),
    ([0, 1, 0, 0, 0], 1426.0, -3.4),
    ([0, 0, 1, 0, 0], 712.0, 0.1),
    ([-2, 1, 0, 2, 2], -517.0, 1.2),
    ([0, 0, 0, 2, 1], -386.0, -0.4),
    ([0, 0, 1, 2, 2], -301.0, 0.0),
    ([-2, -1, 0, 2, 2], 217.0, -0.5),
    ([-2, 0, 1, 0, 0], -158.0, 0.0),
    ([-2, 0, 0, 2, 1], 129.0, 0.1),
    ([0, 0, -1, 2, 2], 123.0, 0.0),
    ([2, 0, 0, 0, 0], 63.0, 0.0),
    ([0, 0, 1, 0, 1], 63.0, 0.1),
    ([2, 0, -1, 2, 2], -59.0, 0.0),
    ([0, 0, -1, 0, 1], -58.0, -0.1),
    ([0, 0, 1, 2, 1], -51.0, 0.0),
    ([-2, 0, 2, 0, 0], 48.0, 0.0),
    ([0, 0, -2, 2, 1], 46.0, 0.0),
    ([2, 0, 0, 2, 2], -38.0, 0.0),
    ([0, 0, 2, 2, 2], -31.0, 0.0),
    ([0, 0, 2, 0, 0], 29.0, 0.0),
    ([-2, 0, 1, 2, 2], 29.0, 0.0),
    ([0, 0, 0, 2, 0], 26.0, 0.0),
    ([-2, 0, 0, 2, 0], -22.0, 0.0),
    ([0, 0, -1, 2, 1], 21.0, 0.0),
    ([0, 2, 0, 0, 0], 17.0, -0.1),
    ([2, 0, -1, 0, 1], 16.0, 0.0),
    ([-2, 2, 0, 2, 2], -16.0, 0.1),
    ([0, 1, 0, 0, 1], -15.0, 0.0),
    ([-2, 0, 1, 0, 1], -13.0, 0.0),
    ([0, -1, 0, 0, 1], -12.0, 0.0),
    ([0, 0, 2, -2, 0], 11.0, 0.0),
    ([2, 0, -1, 2, 1], -10.0, 0.0),
    ([2, 0, 1, 2, 2], -8.0, 0.0),
    ([0, 1, 0, 2, 2], 7.0, 0.0),
    ([-2, 1, 1, 0, 0], -7.0, 0.0),
    ([0, -1, 0, 2, 2], -7.0, 0.0),
    ([2, 0, 0, 2, 1], -7.0, 0.0),
    ([2, 0, 1, 0, 0], 6.0, 0.0),
    ([-2, 0, 2, 2, 2], 6.0, 0.0),
    ([-2, 0, 1, 2, 1], 6.0, 0.0),
    ([2, 0, -2, 0, 1], -6.0, 0.0),
    ([2, 0, 0, 0, 1], -6.0, 0.0),
    ([0, -1, 1, 0, 0], 5.0, 0.0),
    ([-2, -1, 0, 2, 1], -5.0, 0.0),
    ([-2, 0, 0, 0, 1], -5.0, 0.0),
    ([0, 0, 2, 2, 1], -5.0, 0.0),
    ([-2, 0, 2, 0, 1], 4.0, 0.0),
    ([-2, 1, 0, 2, 1], 4.0, 0.0),
    ([0, 0, 1, -2, 0], 4.0, 0.0),
    ([-1, 0, 1, 0, 0], -4.0, 0.0),
    ([-2, 1, 0, 0, 0], -4.0, 0.0),
    ([1, 0, 0, 0, 0], -4.0, 0.0),
    ([0, 0, 1, 2, 0], 3.0, 0.0),
    ([0, 0, -2, 2, 2], -3.0, 0.0),
    ([-1, -1, 1, 0, 0], -3.0, 0.0),
    ([0, 1, 1, 0, 0], -3.0, 0.0),
    ([0, -1, 1, 2, 2], -3.0, 0.0),
    ([2, -1, -1, 2, 2], -3.0, 0.0),
    ([0, 0, 3, 2, 2], -3.0, 0.0),
    ([2, -1, 0, 2, 2], -3.0, 0.0),
];
